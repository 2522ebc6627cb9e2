#include "sasfocus/slc.hpp"

#include <cmath>
#include <numbers>

namespace sasfocus {

void validate_slc(const SlcImage& g) {
  if (g.rows != g.cols) throw std::invalid_argument("SLC must be square");
  if (g.rows < 8 || !is_power_of_two(g.rows))
    throw std::invalid_argument("SLC size must be a power of two >= 8");
  for (const auto& z : g.data)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument("SLC contains non-finite values");
}

RealImage magnitude(const SlcImage& g) {
  RealImage out(g.rows, g.cols);
  for (std::size_t i = 0; i < g.size(); ++i) out.data[i] = std::abs(g.data[i]);
  return out;
}

RealImage phase_map(const SlcImage& g) {
  RealImage out(g.rows, g.cols);
  constexpr double pi = std::numbers::pi;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cplx z = g.data[i];
    double a = (z == cplx(0.0, 0.0)) ? 0.0 : std::arg(z);
    if (a == pi) a = -pi;  // [-pi, pi) branch
    out.data[i] = a / pi;
  }
  return out;
}

}  // namespace sasfocus
