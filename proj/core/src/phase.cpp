#include "sasfocus/phase.hpp"

#include "sasfocus/fft.hpp"

#include <cmath>

namespace sasfocus {

std::vector<double> normalized_grid(std::size_t m) {
  if (m < 2) throw std::invalid_argument("grid needs at least 2 samples");
  std::vector<double> u(m);
  for (std::size_t n = 0; n < m; ++n)
    u[n] = 2.0 * static_cast<double>(n) / static_cast<double>(m - 1) - 1.0;
  return u;
}

std::vector<double> eval_phase(const PhasePolynomial& p, std::size_t m) {
  const auto u = normalized_grid(m);
  std::vector<double> phi(m, 0.0);
  for (std::size_t n = 0; n < m; ++n) {
    // Horner over degrees 10..2, then multiply the remaining u^2
    double acc = 0.0;
    for (int d = PhasePolynomial::kMaxDegree; d >= PhasePolynomial::kMinDegree; --d)
      acc = acc * u[n] + p.coeff(d);
    phi[n] = acc * u[n] * u[n];
  }
  return phi;
}

ApertureSpectrum apply_phase(const ApertureSpectrum& G, const std::vector<double>& phi,
                             int sign) {
  if (phi.size() != G.rows)
    throw std::invalid_argument("apply_phase: phase length must equal row count");
  ApertureSpectrum out(G.rows, G.cols);
  for (std::size_t n = 0; n < G.rows; ++n) {
    const cplx rot = std::polar(1.0, sign * phi[n]);
    for (std::size_t c = 0; c < G.cols; ++c) out.at(n, c) = rot * G.at(n, c);
  }
  return out;
}

SlcImage corrupt(const SlcImage& g, const PhasePolynomial& p) {
  return ifft_along_track(apply_phase(fft_along_track(g), eval_phase(p, g.rows), +1));
}

SlcImage correct(const SlcImage& g_e, const PhasePolynomial& p) {
  return ifft_along_track(apply_phase(fft_along_track(g_e), eval_phase(p, g_e.rows), -1));
}

std::vector<double> phase_slope_adjoint(const ApertureSpectrum& H, const SlcImage& g,
                                        const RealImage& d_mag) {
  SlcImage b(g.rows, g.cols);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double a = std::abs(g.data[i]);
    if (a > 0.0) b.data[i] = (d_mag.data[i] / a) * g.data[i];
  }
  const ApertureSpectrum fb = fft_along_track(b);

  std::vector<double> dphi(H.rows, 0.0);
  for (std::size_t n = 0; n < H.rows; ++n) {
    double acc = 0.0;
    for (std::size_t c = 0; c < H.cols; ++c)
      acc += std::imag(H.at(n, c) * std::conj(fb.at(n, c)));
    dphi[n] = acc;
  }
  return dphi;
}

void accumulate_coeff_slope(const std::vector<double>& dphi,
                            double out[PhasePolynomial::kCoeffCount]) {
  const auto u = normalized_grid(dphi.size());
  for (int d = PhasePolynomial::kMinDegree; d <= PhasePolynomial::kMaxDegree; ++d) {
    double acc = 0.0;
    for (std::size_t n = 0; n < dphi.size(); ++n)
      acc += dphi[n] * std::pow(u[n], static_cast<double>(d));
    out[d - PhasePolynomial::kMinDegree] = acc;
  }
}

}  // namespace sasfocus
