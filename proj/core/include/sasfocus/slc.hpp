#ifndef SASFOCUS_SLC_HPP
#define SASFOCUS_SLC_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sasfocus {

using cplx = std::complex<double>;

/// Complex single-look image, square M x M. First dimension (rows) is
/// along-track, second (cols) is range. Row-major storage.
struct SlcImage {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<cplx> data;

  SlcImage() = default;
  SlcImage(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  cplx& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const cplx& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::size_t size() const { return data.size(); }
};

/// Along-track spectrum: each range column transformed over the row index.
/// Same layout as SlcImage.
using ApertureSpectrum = SlcImage;

/// Real-valued image with the same layout (magnitudes, weights, DRC output,
/// phase maps).
struct RealImage {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  RealImage() = default;
  RealImage(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const double& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::size_t size() const { return data.size(); }
};

/// Display-referred intensity in [0, 1].
using DrcImage = RealImage;

/// Low-frequency aperture phase model: coefficients for monomials u^2..u^10
/// on the normalized coordinate u in [-1, 1]. Degrees 0 and 1 are excluded
/// (they do not change image sharpness).
struct PhasePolynomial {
  static constexpr int kMinDegree = 2;
  static constexpr int kMaxDegree = 10;
  static constexpr int kCoeffCount = kMaxDegree - kMinDegree + 1;  // 9

  double coeffs[kCoeffCount] = {};  // coeffs[d - 2] multiplies u^d

  double& coeff(int degree) { return coeffs[degree - kMinDegree]; }
  double coeff(int degree) const { return coeffs[degree - kMinDegree]; }
};

inline bool is_power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

/// Throws unless the image is square with power-of-two M >= 8 and all
/// values finite.
void validate_slc(const SlcImage& g);

/// |g| per pixel.
RealImage magnitude(const SlcImage& g);

/// Elementwise arg(g) on the [-pi, pi) branch, arg(0) := 0, scaled by 1/pi
/// into [-1, 1).
RealImage phase_map(const SlcImage& g);

}  // namespace sasfocus

#endif
