#ifndef SASFOCUS_IQA_HPP
#define SASFOCUS_IQA_HPP

#include "sasfocus/gd.hpp"
#include "sasfocus/regressor.hpp"
#include "sasfocus/scene.hpp"
#include "sasfocus/slc.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sasfocus {

struct DespeckleConfig {
  double lambda = 1.0;        // fidelity weight; larger keeps more data
  std::size_t iterations = 50;
  bool log_domain = true;     // multiplicative noise model
};

/// Total-variation denoising (split-Bregman, fixed iteration budget),
/// optionally in the log domain. Input must be non-negative.
RealImage despeckle(const RealImage& img, const DespeckleConfig& cfg = {});

/// 10 log10(1 / MSE) for images in [0, 1]; +inf for identical inputs.
double psnr(const DrcImage& ref, const DrcImage& test);

/// Multi-scale SSIM, up to 5 scales (11x11 Gaussian window, sigma 1.5,
/// K1 = 0.01, K2 = 0.03, dynamic range 1). Coarse scales are dropped and
/// the weights renormalized when the image is too small for all 5.
double ms_ssim(const DrcImage& ref, const DrcImage& test);

struct EvalMethod {
  std::string name;
  // correction to evaluate; receives the defocused image and its record
  std::function<SlcImage(const SlcImage& g_e, const ManifestRecord& rec)> correct;
};

EvalMethod method_identity();
EvalMethod method_oracle();
EvalMethod method_gd(const MetricKind& metric, double learning_rate,
                     std::size_t iterations = 10);
EvalMethod method_deep(RegressorParams params);

struct EvalRecord {
  std::string id;
  std::string method;
  bool failed = false;
  double psnr_db = 0.0;
  double ms_ssim_value = 0.0;
  double mns_before = 0.0;
  double mns_after = 0.0;
  double runtime_s = 0.0;
};

struct MethodSummary {
  std::string method;
  double psnr_mean = 0.0, psnr_min = 0.0, psnr_max = 0.0;
  double msssim_mean = 0.0, msssim_min = 0.0, msssim_max = 0.0;
};

struct EvalSummary {
  std::vector<EvalRecord> records;
  std::vector<MethodSummary> methods;
};

/// Runs every method over the manifest's test split: correct, DRC, despeckle,
/// then PSNR and MS-SSIM against the despeckled-DRC ground truth. Timings
/// cover the correction only. Writes the per-image CSV when out_csv is set.
EvalSummary evaluate(const DatasetManifest& manifest, const std::vector<EvalMethod>& methods,
                     const std::optional<std::filesystem::path>& out_csv,
                     const DespeckleConfig& despeckle_cfg = {});

}  // namespace sasfocus

#endif
