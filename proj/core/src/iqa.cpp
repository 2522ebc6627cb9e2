#include "sasfocus/iqa.hpp"

#include "sasfocus/drc.hpp"
#include "sasfocus/phase.hpp"
#include "sasfocus/pipeline.hpp"
#include "sasfocus/slc_io.hpp"
#include "sasfocus/threading.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>

namespace sasfocus {

namespace {

constexpr double kLogEps = 1e-6;

/// Isotropic split-Bregman TV: min_u lambda/2 ||u - f||^2 + TV(u).
RealImage tv_denoise(const RealImage& f, double lambda, std::size_t iterations) {
  const std::size_t rows = f.rows, cols = f.cols;
  const double mu = 5.0;  // Bregman penalty weight
  RealImage u = f;
  RealImage dx(rows, cols), dy(rows, cols), bx(rows, cols), by(rows, cols);

  auto grad_x = [&](const RealImage& v, std::size_t r, std::size_t c) {
    return (r + 1 < rows) ? v.at(r + 1, c) - v.at(r, c) : 0.0;
  };
  auto grad_y = [&](const RealImage& v, std::size_t r, std::size_t c) {
    return (c + 1 < cols) ? v.at(r, c + 1) - v.at(r, c) : 0.0;
  };

  for (std::size_t it = 0; it < iterations; ++it) {
    // one Gauss-Seidel sweep on (lambda - mu Laplacian) u = lambda f + mu div(d - b)
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        double nb_sum = 0.0;
        int nb = 0;
        if (r > 0) { nb_sum += u.at(r - 1, c); ++nb; }
        if (r + 1 < rows) { nb_sum += u.at(r + 1, c); ++nb; }
        if (c > 0) { nb_sum += u.at(r, c - 1); ++nb; }
        if (c + 1 < cols) { nb_sum += u.at(r, c + 1); ++nb; }

        double div = 0.0;
        if (r > 0) div += dx.at(r - 1, c) - bx.at(r - 1, c);
        if (r + 1 < rows) div -= dx.at(r, c) - bx.at(r, c);
        if (c > 0) div += dy.at(r, c - 1) - by.at(r, c - 1);
        if (c + 1 < cols) div -= dy.at(r, c) - by.at(r, c);

        u.at(r, c) = (lambda * f.at(r, c) + mu * (nb_sum + div)) /
                     (lambda + mu * static_cast<double>(nb));
      }
    }

    // shrinkage and Bregman update
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        const double gx = grad_x(u, r, c);
        const double gy = grad_y(u, r, c);
        const double sx = gx + bx.at(r, c);
        const double sy = gy + by.at(r, c);
        const double s = std::sqrt(sx * sx + sy * sy);
        const double shrink = (s > 0.0) ? std::max(s - 1.0 / mu, 0.0) / s : 0.0;
        dx.at(r, c) = shrink * sx;
        dy.at(r, c) = shrink * sy;
        bx.at(r, c) += gx - dx.at(r, c);
        by.at(r, c) += gy - dy.at(r, c);
      }
    }
  }
  return u;
}

}  // namespace

RealImage despeckle(const RealImage& img, const DespeckleConfig& cfg) {
  if (cfg.lambda <= 0.0) throw std::invalid_argument("despeckle: lambda must be > 0");
  for (double v : img.data)
    if (v < 0.0) throw std::invalid_argument("despeckle: negative input pixel");

  if (!cfg.log_domain) return tv_denoise(img, cfg.lambda, cfg.iterations);

  RealImage logged(img.rows, img.cols);
  for (std::size_t i = 0; i < img.size(); ++i) logged.data[i] = std::log(img.data[i] + kLogEps);
  RealImage out = tv_denoise(logged, cfg.lambda, cfg.iterations);
  for (double& v : out.data) v = std::max(0.0, std::exp(v) - kLogEps);
  return out;
}

double psnr(const DrcImage& ref, const DrcImage& test) {
  if (ref.rows != test.rows || ref.cols != test.cols)
    throw std::invalid_argument("psnr: shape mismatch");
  double mse = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double d = ref.data[i] - test.data[i];
    mse += d * d;
  }
  mse /= static_cast<double>(ref.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

namespace {

std::vector<double> gaussian_window_11() {
  std::vector<double> w(11);
  double sum = 0.0;
  for (int i = 0; i < 11; ++i) {
    const double x = i - 5.0;
    w[static_cast<std::size_t>(i)] = std::exp(-x * x / (2.0 * 1.5 * 1.5));
    sum += w[static_cast<std::size_t>(i)];
  }
  for (auto& v : w) v /= sum;
  return w;
}

/// Separable valid-region Gaussian filter; output is (rows-10) x (cols-10).
RealImage gauss_filter_valid(const RealImage& img, const std::vector<double>& w) {
  const std::size_t rows = img.rows, cols = img.cols;
  RealImage tmp(rows, cols - 10);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c + 10 < cols; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 11; ++k) acc += w[k] * img.at(r, c + k);
      tmp.at(r, c) = acc;
    }
  RealImage out(rows - 10, cols - 10);
  for (std::size_t r = 0; r + 10 < rows; ++r)
    for (std::size_t c = 0; c < out.cols; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 11; ++k) acc += w[k] * tmp.at(r + k, c);
      out.at(r, c) = acc;
    }
  return out;
}

RealImage downsample2(const RealImage& img) {
  RealImage out(img.rows / 2, img.cols / 2);
  for (std::size_t r = 0; r < out.rows; ++r)
    for (std::size_t c = 0; c < out.cols; ++c)
      out.at(r, c) = 0.25 * (img.at(2 * r, 2 * c) + img.at(2 * r + 1, 2 * c) +
                             img.at(2 * r, 2 * c + 1) + img.at(2 * r + 1, 2 * c + 1));
  return out;
}

void ssim_terms(const RealImage& a, const RealImage& b, double& luminance,
                double& contrast_structure) {
  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  static const std::vector<double> w = gaussian_window_11();

  const RealImage mu_a = gauss_filter_valid(a, w);
  const RealImage mu_b = gauss_filter_valid(b, w);

  RealImage aa(a.rows, a.cols), bb(a.rows, a.cols), ab(a.rows, a.cols);
  for (std::size_t i = 0; i < a.size(); ++i) {
    aa.data[i] = a.data[i] * a.data[i];
    bb.data[i] = b.data[i] * b.data[i];
    ab.data[i] = a.data[i] * b.data[i];
  }
  const RealImage m_aa = gauss_filter_valid(aa, w);
  const RealImage m_bb = gauss_filter_valid(bb, w);
  const RealImage m_ab = gauss_filter_valid(ab, w);

  double l_acc = 0.0, cs_acc = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a.data[i], mb = mu_b.data[i];
    const double va = m_aa.data[i] - ma * ma;
    const double vb = m_bb.data[i] - mb * mb;
    const double cov = m_ab.data[i] - ma * mb;
    l_acc += (2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1);
    cs_acc += (2.0 * cov + c2) / (va + vb + c2);
  }
  luminance = l_acc / static_cast<double>(mu_a.size());
  contrast_structure = cs_acc / static_cast<double>(mu_a.size());
}

}  // namespace

double ms_ssim(const DrcImage& ref, const DrcImage& test) {
  if (ref.rows != test.rows || ref.cols != test.cols)
    throw std::invalid_argument("ms_ssim: shape mismatch");
  static constexpr double kWeights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

  std::size_t min_dim = std::min(ref.rows, ref.cols);
  std::size_t scales = 0;
  for (std::size_t s = 0; s < 5 && (min_dim >> s) >= 11; ++s) scales = s + 1;
  if (scales == 0) throw std::invalid_argument("ms_ssim: image smaller than the 11x11 window");

  double weight_sum = 0.0;
  for (std::size_t s = 0; s < scales; ++s) weight_sum += kWeights[s];

  RealImage a = ref, b = test;
  double log_acc = 0.0;
  for (std::size_t s = 0; s < scales; ++s) {
    double lum = 0.0, cs = 0.0;
    ssim_terms(a, b, lum, cs);
    const double w = kWeights[s] / weight_sum;
    const double term = (s + 1 == scales) ? std::max(lum, 0.0) * std::max(cs, 0.0)
                                          : std::max(cs, 0.0);
    if (term <= 0.0) return 0.0;
    log_acc += w * std::log(term);
    if (s + 1 < scales) {
      a = downsample2(a);
      b = downsample2(b);
    }
  }
  return std::clamp(std::exp(log_acc), 0.0, 1.0);
}

EvalMethod method_identity() {
  return {"identity", [](const SlcImage& g_e, const ManifestRecord&) { return g_e; }};
}

EvalMethod method_oracle() {
  return {"oracle", [](const SlcImage& g_e, const ManifestRecord& rec) {
            return correct(g_e, rec.corruption.realized);
          }};
}

EvalMethod method_gd(const MetricKind& metric, double learning_rate, std::size_t iterations) {
  GdConfig cfg{metric, learning_rate, iterations, weight_identity()};
  return {"gd-" + metric_name(metric), [cfg](const SlcImage& g_e, const ManifestRecord&) {
            return focus_gd(g_e, cfg).g_hat;
          }};
}

EvalMethod method_deep(RegressorParams params) {
  auto shared = std::make_shared<RegressorParams>(std::move(params));
  return {"deep", [shared](const SlcImage& g_e, const ManifestRecord&) {
            return infer(g_e, *shared).g_hat;
          }};
}

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

EvalSummary evaluate(const DatasetManifest& manifest, const std::vector<EvalMethod>& methods,
                     const std::optional<std::filesystem::path>& out_csv,
                     const DespeckleConfig& despeckle_cfg) {
  const auto test_records = manifest.split("test");
  if (test_records.empty()) throw std::invalid_argument("evaluate: empty test split");

  EvalSummary summary;
  summary.records.resize(test_records.size() * methods.size());

  parallel_for(test_records.size(), [&](std::size_t i) {
    const ManifestRecord& rec = *test_records[i];
    const SlcImage gt = read_slc(manifest.root / rec.gt_path);
    const SlcImage g_e = read_slc(manifest.root / rec.corrupt_path);
    const RealImage ref = despeckle(drc(gt), despeckle_cfg);
    const double before = mns(g_e);

    for (std::size_t m = 0; m < methods.size(); ++m) {
      EvalRecord& out = summary.records[i * methods.size() + m];
      out.id = rec.id;
      out.method = methods[m].name;
      out.mns_before = before;
      try {
        const auto t0 = std::chrono::steady_clock::now();
        const SlcImage g_hat = methods[m].correct(g_e, rec);
        const auto t1 = std::chrono::steady_clock::now();
        out.runtime_s = std::chrono::duration<double>(t1 - t0).count();
        out.mns_after = mns(g_hat);
        const RealImage processed = despeckle(drc(g_hat), despeckle_cfg);
        out.psnr_db = psnr(ref, processed);
        out.ms_ssim_value = ms_ssim(ref, processed);
      } catch (const std::exception&) {
        out.failed = true;
        out.psnr_db = out.ms_ssim_value = out.mns_after =
            std::numeric_limits<double>::quiet_NaN();
      }
    }
  });

  for (const auto& method : methods) {
    MethodSummary ms;
    ms.method = method.name;
    ms.psnr_min = ms.msssim_min = std::numeric_limits<double>::infinity();
    ms.psnr_max = ms.msssim_max = -std::numeric_limits<double>::infinity();
    std::size_t n = 0;
    for (const auto& rec : summary.records) {
      if (rec.method != method.name || rec.failed) continue;
      ms.psnr_mean += rec.psnr_db;
      ms.msssim_mean += rec.ms_ssim_value;
      ms.psnr_min = std::min(ms.psnr_min, rec.psnr_db);
      ms.psnr_max = std::max(ms.psnr_max, rec.psnr_db);
      ms.msssim_min = std::min(ms.msssim_min, rec.ms_ssim_value);
      ms.msssim_max = std::max(ms.msssim_max, rec.ms_ssim_value);
      ++n;
    }
    if (n > 0) {
      ms.psnr_mean /= static_cast<double>(n);
      ms.msssim_mean /= static_cast<double>(n);
    }
    summary.methods.push_back(ms);
  }

  if (out_csv) {
    std::ofstream os(*out_csv, std::ios::binary);
    if (!os) throw std::runtime_error("cannot create " + out_csv->string());
    os << "id,method,psnr_db,ms_ssim,mns_before,mns_after,runtime_s\n";
    for (const auto& rec : summary.records) {
      os << rec.id << ',' << rec.method << ',' << format_value(rec.psnr_db) << ','
         << format_value(rec.ms_ssim_value) << ',' << format_value(rec.mns_before) << ','
         << format_value(rec.mns_after) << ',' << format_value(rec.runtime_s) << '\n';
    }
  }
  return summary;
}

}  // namespace sasfocus
