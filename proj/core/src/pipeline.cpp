#include "sasfocus/pipeline.hpp"

#include "sasfocus/drc.hpp"
#include "sasfocus/fft.hpp"
#include "sasfocus/phase.hpp"
#include "sasfocus/rng.hpp"
#include "sasfocus/slc_io.hpp"
#include "sasfocus/threading.hpp"

#include <algorithm>
#include <cmath>

namespace sasfocus {

namespace {

struct ForwardState {
  PipelineOutput out;
  RegressorTrace trace;
  DrcImage drc_img;
  RealImage phase_img;
  ApertureSpectrum H;
  RealImage mag_hat;
  double mns_input = 0.0;
};

ForwardState run_forward(const SlcImage& g_e, const RegressorParams& params,
                         bool keep_trace) {
  validate_slc(g_e);
  ForwardState st;
  st.mns_input = mns(g_e);
  if (st.mns_input <= 0.0) throw std::domain_error("pipeline: input MNS is zero");

  st.drc_img = drc(g_e);
  st.phase_img = phase_map(g_e);
  st.out.coeffs = regressor_forward(st.drc_img, st.phase_img, params,
                                    keep_trace ? &st.trace : nullptr);

  const ApertureSpectrum G_e = fft_along_track(g_e);
  st.H = apply_phase(G_e, eval_phase(st.out.coeffs, g_e.rows), -1);
  st.out.g_hat = ifft_along_track(st.H);
  st.mag_hat = magnitude(st.out.g_hat);

  const double mns_hat = metric_value(MetricKind::mns(), st.mag_hat);
  st.out.loss = -(mns_hat - st.mns_input) / st.mns_input;
  if (!std::isfinite(st.out.loss)) throw std::runtime_error("pipeline: non-finite loss");
  return st;
}

}  // namespace

PipelineOutput pipeline_forward(const SlcImage& g_e, const RegressorParams& params) {
  return run_forward(g_e, params, false).out;
}

PipelineOutput pipeline_backward(const SlcImage& g_e, const RegressorParams& params,
                                 RegressorParams& grad) {
  ForwardState st = run_forward(g_e, params, true);

  // d loss / d MNS(|g_hat|)
  const double d_mns = -1.0 / st.mns_input;

  // d MNS / d magnitude, population stddev over mean
  const RealImage& a = st.mag_hat;
  const double n = static_cast<double>(a.size());
  double mean = 0.0;
  for (double v : a.data) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : a.data) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);

  RealImage d_mag(a.rows, a.cols);
  if (sd > 0.0 && mean > 0.0) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = (a.data[i] - mean) / (n * sd * mean) - sd / (n * mean * mean);
      d_mag.data[i] = d_mns * d;
    }
  }

  const std::vector<double> dphi = phase_slope_adjoint(st.H, st.out.g_hat, d_mag);
  double d_coeffs[PhasePolynomial::kCoeffCount];
  accumulate_coeff_slope(dphi, d_coeffs);

  regressor_backward(d_coeffs, st.drc_img, st.phase_img, params, st.trace, grad);
  return st.out;
}

FocusResult infer(const SlcImage& g_e, const RegressorParams& params) {
  PipelineOutput out = pipeline_forward(g_e, params);
  FocusResult r;
  r.phi_hat = out.coeffs;
  r.trace = {-metric_value(MetricKind::mns(), magnitude(out.g_hat))};
  r.g_hat = std::move(out.g_hat);
  return r;
}

namespace {

constexpr std::uint64_t kShuffleStream = 0x5348554646ULL;   // batch order
constexpr std::uint64_t kCorruptStream = 0x434F525255ULL;   // per-epoch corruption

std::vector<SlcImage> load_split(const DatasetManifest& manifest, const std::string& split,
                                 bool ground_truth) {
  std::vector<SlcImage> images;
  for (const auto* rec : manifest.split(split))
    images.push_back(read_slc(manifest.root / (ground_truth ? rec->gt_path : rec->corrupt_path)));
  return images;
}

}  // namespace

std::pair<RegressorParams, TrainHistory> train(const DatasetManifest& manifest,
                                               const TrainConfig& cfg) {
  if (cfg.batch_size < 1 || cfg.epochs < 1)
    throw std::invalid_argument("train: batch size and epochs must be >= 1");

  const std::vector<SlcImage> train_gt =
      cfg.fresh_corruption_per_epoch ? load_split(manifest, "train", true)
                                     : std::vector<SlcImage>{};
  const std::vector<SlcImage> train_fixed =
      cfg.fresh_corruption_per_epoch ? std::vector<SlcImage>{}
                                     : load_split(manifest, "train", false);
  const std::vector<SlcImage> val_images = load_split(manifest, "val", false);
  const std::size_t n_train =
      cfg.fresh_corruption_per_epoch ? train_gt.size() : train_fixed.size();
  if (n_train == 0 || val_images.empty())
    throw std::invalid_argument("train: manifest needs non-empty train and val splits");

  // fft of each ground-truth image is corruption-invariant; cache it
  std::vector<ApertureSpectrum> train_spectra;
  for (const auto& g : train_gt) train_spectra.push_back(fft_along_track(g));

  RegressorParams params = init_params(cfg.seed);
  RegressorParams best_params = params;
  TrainHistory history;
  double best_val = std::numeric_limits<double>::infinity();

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<std::size_t> order(n_train);
    for (std::size_t i = 0; i < n_train; ++i) order[i] = i;
    SplitMix64 shuffle_rng(derive_seed(cfg.seed ^ kShuffleStream, epoch));
    for (std::size_t i = n_train - 1; i > 0; --i)
      std::swap(order[i], order[shuffle_rng.next_below(i + 1)]);

    // per-epoch corrupted views of the training images
    std::vector<SlcImage> epoch_images(n_train);
    if (cfg.fresh_corruption_per_epoch) {
      const std::uint64_t epoch_seed = derive_seed(cfg.seed ^ kCorruptStream, epoch);
      parallel_for(n_train, [&](std::size_t i) {
        const CorruptionSpec c =
            sample_corruption(train_gt[i].rows, derive_seed(epoch_seed, i));
        epoch_images[i] = ifft_along_track(apply_phase(
            train_spectra[i], eval_phase(c.realized, train_gt[i].rows), +1));
      });
    } else {
      epoch_images = train_fixed;
    }

    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n_train; start += cfg.batch_size) {
      const std::size_t count = std::min(cfg.batch_size, n_train - start);
      std::vector<RegressorParams> grads(count);
      std::vector<double> losses(count);
      parallel_for(count, [&](std::size_t k) {
        grads[k] = zero_like(params);
        const PipelineOutput out =
            pipeline_backward(epoch_images[order[start + k]], params, grads[k]);
        losses[k] = out.loss;
      });
      // fixed-order reduction keeps results bit-reproducible under threading
      RegressorParams mean_grad = zero_like(params);
      for (std::size_t k = 0; k < count; ++k) {
        mean_grad.add_scaled(grads[k], 1.0 / static_cast<double>(count));
        epoch_loss += losses[k];
        if (!std::isfinite(losses[k]))
          throw std::runtime_error("train: loss diverged at epoch " + std::to_string(epoch));
      }
      params.add_scaled(mean_grad, -cfg.learning_rate);
    }
    history.train_loss.push_back(epoch_loss / static_cast<double>(n_train));

    std::vector<double> vloss(val_images.size());
    parallel_for(val_images.size(), [&](std::size_t i) {
      vloss[i] = pipeline_forward(val_images[i], params).loss;
    });
    double val_mean = 0.0;
    for (double v : vloss) val_mean += v;
    val_mean /= static_cast<double>(val_images.size());
    if (!std::isfinite(val_mean))
      throw std::runtime_error("train: validation loss diverged at epoch " +
                               std::to_string(epoch));
    history.val_loss.push_back(val_mean);

    if (val_mean < best_val) {
      best_val = val_mean;
      best_params = params;
      history.best_epoch = epoch;
    }
  }
  return {std::move(best_params), std::move(history)};
}

}  // namespace sasfocus
