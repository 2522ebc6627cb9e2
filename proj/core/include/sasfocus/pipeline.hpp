#ifndef SASFOCUS_PIPELINE_HPP
#define SASFOCUS_PIPELINE_HPP

#include "sasfocus/gd.hpp"
#include "sasfocus/regressor.hpp"
#include "sasfocus/scene.hpp"
#include "sasfocus/slc.hpp"

namespace sasfocus {

struct PipelineOutput {
  SlcImage g_hat;          // complex corrected image
  PhasePolynomial coeffs;  // regressor output
  double loss = 0.0;       // relative sharpness improvement, negated
};

/// Single pass of the learned corrector: DRC + phase map -> regressor ->
/// phase correction in k-space -> relative MNS loss
///   loss = -(MNS(|g_hat|) - MNS(|g_e|)) / MNS(|g_e|).
PipelineOutput pipeline_forward(const SlcImage& g_e, const RegressorParams& params);

/// Exact reverse-mode gradient of the pipeline loss with respect to every
/// parameter. DRC and phase inputs are data; no gradient flows into g_e.
/// Accumulates into grad; returns the forward output.
PipelineOutput pipeline_backward(const SlcImage& g_e, const RegressorParams& params,
                                 RegressorParams& grad);

/// One forward pass packaged like the iterative focuser's result; the
/// single trace entry is the minimization objective -MNS(|g_hat|).
FocusResult infer(const SlcImage& g_e, const RegressorParams& params);

struct TrainConfig {
  std::size_t batch_size = 32;
  double learning_rate = 1e-2;
  std::size_t epochs = 1;
  std::uint64_t seed = 0;
  bool fresh_corruption_per_epoch = true;
};

struct TrainHistory {
  std::vector<double> train_loss;  // per-epoch mean
  std::vector<double> val_loss;    // per-epoch mean
  std::size_t best_epoch = 0;      // argmin val_loss, earliest tie
};

/// Plain mini-batch SGD on the pipeline loss. Returns the checkpoint with
/// the best (lowest) validation loss. Deterministic given the seed.
std::pair<RegressorParams, TrainHistory> train(const DatasetManifest& manifest,
                                               const TrainConfig& cfg);

}  // namespace sasfocus

#endif
