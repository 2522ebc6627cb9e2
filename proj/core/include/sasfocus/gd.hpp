#ifndef SASFOCUS_GD_HPP
#define SASFOCUS_GD_HPP

#include "sasfocus/metrics.hpp"
#include "sasfocus/slc.hpp"
#include "sasfocus/weights.hpp"

#include <vector>

namespace sasfocus {

struct GdConfig {
  MetricKind metric = MetricKind::mns();
  double learning_rate = 1e-3;
  std::size_t iterations = 10;
  WeightFn weight = weight_identity();
};

struct FocusResult {
  SlcImage g_hat;
  PhasePolynomial phi_hat;
  std::vector<double> trace;  // minimization objective after each update
};

/// Raised when the objective or gradient becomes non-finite mid-run.
struct DivergenceError : std::runtime_error {
  std::size_t iteration;
  explicit DivergenceError(std::size_t iter)
      : std::runtime_error("gradient descent diverged at iteration " +
                           std::to_string(iter)),
        iteration(iter) {}
};

/// Fixed-step gradient descent on the weighted sharpness objective over
/// phase-polynomial coefficients, starting from zero.
FocusResult focus_gd(const SlcImage& g_e, const GdConfig& cfg);

/// Grid search for the learning rate maximizing the mean final metric value
/// over the image set after `iterations` descent steps. Ties break toward
/// the smaller rate; rates that diverge on any image are skipped.
double crossval_lr(const std::vector<SlcImage>& images, const MetricKind& metric,
                   const std::vector<double>& grid, std::size_t iterations = 10);

/// The ten-decade default grid 1e-6 .. 1e3.
std::vector<double> default_lr_grid();

}  // namespace sasfocus

#endif
