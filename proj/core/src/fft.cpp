#include "sasfocus/fft.hpp"

#include <cmath>
#include <numbers>

namespace sasfocus {

void fft_radix2(std::span<cplx> buf, int sign) {
  const std::size_t n = buf.size();
  if (!is_power_of_two(n))
    throw std::invalid_argument("fft_radix2: length must be a power of two");

  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(buf[i], buf[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx u = buf[i + k];
        const cplx v = buf[i + k + len / 2] * w;
        buf[i + k] = u + v;
        buf[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& x : buf) x *= scale;
}

namespace {

SlcImage transform_columns(const SlcImage& g, int sign) {
  if (!is_power_of_two(g.rows))
    throw std::invalid_argument("along-track FFT: rows must be a power of two");
  SlcImage out(g.rows, g.cols);
  std::vector<cplx> col(g.rows);
  for (std::size_t c = 0; c < g.cols; ++c) {
    for (std::size_t r = 0; r < g.rows; ++r) col[r] = g.at(r, c);
    fft_radix2(col, sign);
    for (std::size_t r = 0; r < g.rows; ++r) out.at(r, c) = col[r];
  }
  return out;
}

}  // namespace

ApertureSpectrum fft_along_track(const SlcImage& g) { return transform_columns(g, -1); }

SlcImage ifft_along_track(const ApertureSpectrum& G) { return transform_columns(G, +1); }

}  // namespace sasfocus
