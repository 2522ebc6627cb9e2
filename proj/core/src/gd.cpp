#include "sasfocus/gd.hpp"

#include "sasfocus/fft.hpp"
#include "sasfocus/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sasfocus {

FocusResult focus_gd(const SlcImage& g_e, const GdConfig& cfg) {
  if (cfg.iterations < 1) throw std::invalid_argument("focus_gd: iterations must be >= 1");
  if (cfg.learning_rate <= 0.0)
    throw std::invalid_argument("focus_gd: learning rate must be > 0");
  validate_slc(g_e);

  // normalize to unit mean intensity so one learning rate transfers across
  // image brightness; phase estimates are unaffected and g_hat is produced
  // from the original image
  double energy = 0.0;
  for (const auto& z : g_e.data) energy += std::norm(z);
  const double rms = std::sqrt(energy / static_cast<double>(g_e.size()));
  if (rms <= 0.0) throw std::invalid_argument("focus_gd: zero image");

  ApertureSpectrum G_e = fft_along_track(g_e);
  for (auto& z : G_e.data) z /= rms;
  RealImage w(g_e.rows, g_e.cols, 1.0);
  if (cfg.weight.kind != WeightFn::Kind::Identity) w = cfg.weight.apply(magnitude(g_e));

  FocusResult result;
  result.trace.reserve(cfg.iterations);

  for (std::size_t iter = 0; iter < cfg.iterations; ++iter) {
    MetricGradient grad;
    try {
      grad = sharpness_grad(cfg.metric, G_e, result.phi_hat, cfg.weight);
    } catch (const std::runtime_error&) {
      throw DivergenceError(iter);
    }
    for (int k = 0; k < PhasePolynomial::kCoeffCount; ++k)
      result.phi_hat.coeffs[k] -= cfg.learning_rate * grad.d_coeffs[k];

    const SlcImage corrected = ifft_along_track(
        apply_phase(G_e, eval_phase(result.phi_hat, g_e.rows), -1));
    RealImage a = magnitude(corrected);
    for (std::size_t i = 0; i < a.size(); ++i) a.data[i] *= w.data[i];
    const double objective = -objective_value(cfg.metric, a);
    if (!std::isfinite(objective)) throw DivergenceError(iter);
    result.trace.push_back(objective);
  }

  result.g_hat = correct(g_e, result.phi_hat);
  return result;
}

std::vector<double> default_lr_grid() {
  std::vector<double> grid;
  for (int e = -6; e <= 3; ++e) grid.push_back(std::pow(10.0, e));
  return grid;
}

double crossval_lr(const std::vector<SlcImage>& images, const MetricKind& metric,
                   const std::vector<double>& grid, std::size_t iterations) {
  if (images.empty()) throw std::invalid_argument("crossval_lr: no images");
  if (grid.empty()) throw std::invalid_argument("crossval_lr: empty grid");

  std::vector<double> rates(grid);
  std::sort(rates.begin(), rates.end());  // ties break toward the smaller rate

  double best_lr = rates.front();
  double best_score = -std::numeric_limits<double>::infinity();
  for (double lr : rates) {
    double sum = 0.0;
    bool ok = true;
    for (const SlcImage& img : images) {
      try {
        GdConfig cfg{metric, lr, iterations, weight_identity()};
        const FocusResult r = focus_gd(img, cfg);
        // score on unit-mean-intensity magnitudes so the mean is not
        // dominated by the brightest image
        double energy = 0.0;
        for (const auto& z : img.data) energy += std::norm(z);
        const double rms = std::sqrt(energy / static_cast<double>(img.size()));
        RealImage mag = magnitude(r.g_hat);
        for (double& v : mag.data) v /= rms;
        sum += objective_value(metric, mag);
      } catch (const std::exception&) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    const double score = sum / static_cast<double>(images.size());
    if (score > best_score) {  // strict: ties keep the smaller rate
      best_score = score;
      best_lr = lr;
    }
  }
  if (!std::isfinite(best_score))
    throw std::runtime_error("crossval_lr: every grid point diverged");
  return best_lr;
}

}  // namespace sasfocus
