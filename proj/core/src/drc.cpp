#include "sasfocus/drc.hpp"

#include <algorithm>
#include <cmath>

namespace sasfocus {

DrcImage drc_magnitude(const RealImage& mag) {
  double maxv = 0.0;
  for (double v : mag.data) maxv = std::max(maxv, v);
  if (maxv <= 0.0) throw std::invalid_argument("drc: all-zero image");

  std::vector<double> sorted(mag.data);
  for (double& v : sorted) v /= maxv;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double m = (n % 2 == 1) ? sorted[n / 2]
                                : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  if (m <= 0.0 || m >= 1.0)
    throw std::invalid_argument("drc: degenerate magnitude statistics");

  const double q = (0.2 - 0.2 * m) / (m - 0.2 * m);
  DrcImage out(mag.rows, mag.cols);
  for (std::size_t i = 0; i < mag.size(); ++i) {
    const double x = mag.data[i] / maxv;
    out.data[i] = q * x / ((q - 1.0) * x + 1.0);
  }
  return out;
}

DrcImage drc(const SlcImage& g) { return drc_magnitude(magnitude(g)); }

}  // namespace sasfocus
