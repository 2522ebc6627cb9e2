#include "sasfocus/weights.hpp"

#include <algorithm>
#include <cmath>

namespace sasfocus {

WeightFn weight_identity() { return WeightFn{WeightFn::Kind::Identity}; }

WeightFn weight_lowcontrast(std::size_t window, double threshold_quantile) {
  if (window < 3 || window % 2 == 0)
    throw std::invalid_argument("lowcontrast weight: window must be odd and >= 3");
  if (threshold_quantile <= 0.0 || threshold_quantile >= 1.0)
    throw std::invalid_argument("lowcontrast weight: quantile must be in (0, 1)");
  return WeightFn{WeightFn::Kind::LowContrast, window, threshold_quantile};
}

namespace {

/// Windowed population stddev with the window truncated at image borders.
RealImage local_stddev(const RealImage& mag, std::size_t window) {
  const std::ptrdiff_t h = static_cast<std::ptrdiff_t>(window / 2);
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(mag.rows);
  const std::ptrdiff_t cols = static_cast<std::ptrdiff_t>(mag.cols);
  RealImage out(mag.rows, mag.cols);
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    for (std::ptrdiff_t c = 0; c < cols; ++c) {
      double sum = 0.0, sum2 = 0.0;
      std::size_t n = 0;
      for (std::ptrdiff_t dr = -h; dr <= h; ++dr) {
        const std::ptrdiff_t rr = r + dr;
        if (rr < 0 || rr >= rows) continue;
        for (std::ptrdiff_t dc = -h; dc <= h; ++dc) {
          const std::ptrdiff_t cc = c + dc;
          if (cc < 0 || cc >= cols) continue;
          const double v = mag.at(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
          sum += v;
          sum2 += v * v;
          ++n;
        }
      }
      const double mean = sum / static_cast<double>(n);
      const double var = std::max(0.0, sum2 / static_cast<double>(n) - mean * mean);
      out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = std::sqrt(var);
    }
  }
  return out;
}

}  // namespace

RealImage WeightFn::apply(const RealImage& mag) const {
  if (kind == Kind::Identity) return RealImage(mag.rows, mag.cols, 1.0);

  const RealImage sd = local_stddev(mag, window);
  std::vector<double> sorted(sd.data);
  std::sort(sorted.begin(), sorted.end());
  // nearest-rank quantile
  const std::size_t idx = std::min(
      sorted.size() - 1,
      static_cast<std::size_t>(threshold_quantile * static_cast<double>(sorted.size())));
  const double threshold = sorted[idx];

  RealImage w(mag.rows, mag.cols);
  for (std::size_t i = 0; i < sd.size(); ++i)
    w.data[i] = (sd.data[i] < threshold) ? 0.0 : 1.0;
  return w;
}

}  // namespace sasfocus
