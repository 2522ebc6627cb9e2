#ifndef SASFOCUS_FFT_HPP
#define SASFOCUS_FFT_HPP

#include "sasfocus/slc.hpp"

#include <span>

namespace sasfocus {

/// In-place radix-2 FFT of a power-of-two-length buffer. Unitary scaling
/// (1/sqrt(N)) so that forward and inverse are exact adjoints.
/// sign = -1: forward (e^{-i 2 pi kn / N} kernel); sign = +1: inverse.
void fft_radix2(std::span<cplx> buf, int sign);

/// 1-D unitary FFT of every range column along the along-track (row) axis.
ApertureSpectrum fft_along_track(const SlcImage& g);

/// Exact inverse of fft_along_track.
SlcImage ifft_along_track(const ApertureSpectrum& G);

}  // namespace sasfocus

#endif
