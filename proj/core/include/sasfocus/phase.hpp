#ifndef SASFOCUS_PHASE_HPP
#define SASFOCUS_PHASE_HPP

#include "sasfocus/slc.hpp"

namespace sasfocus {

/// Sample points u_n = 2n/(M-1) - 1, n = 0..M-1.
std::vector<double> normalized_grid(std::size_t m);

/// phi[n] = sum_{d=2}^{10} c_d u_n^d over the normalized aperture grid.
std::vector<double> eval_phase(const PhasePolynomial& p, std::size_t m);

/// out[n, r] = exp(i * sign * phi[n]) * G[n, r]. sign = +1 corrupts,
/// sign = -1 corrects.
ApertureSpectrum apply_phase(const ApertureSpectrum& G, const std::vector<double>& phi,
                             int sign);

/// ifft(apply_phase(fft(g), eval_phase(p), +1)) — defocus g with phase error p.
SlcImage corrupt(const SlcImage& g, const PhasePolynomial& p);

/// ifft(apply_phase(fft(g_e), eval_phase(p), -1)) — remove phase error p.
SlcImage correct(const SlcImage& g_e, const PhasePolynomial& p);

/// Adjoint of the correction chain phi -> |ifft(e^{-i phi} G_e)|.
/// Given the corrected spectrum H, its image g = ifft(H), and a scalar
/// objective's slope with respect to |g|, returns dJ/dphi[n]:
///   dJ/dphi[n] = sum_r Im(H[n,r] * conj(fft(B)[n,r])),
///   B = d_mag .* g / |g|  (0 where |g| = 0).
std::vector<double> phase_slope_adjoint(const ApertureSpectrum& H, const SlcImage& g,
                                        const RealImage& d_mag);

/// Contract an aperture-phase slope onto monomial coefficients:
/// out[d-2] = sum_n dphi[n] * u_n^d for d = 2..10.
void accumulate_coeff_slope(const std::vector<double>& dphi, double out[PhasePolynomial::kCoeffCount]);

}  // namespace sasfocus

#endif
