#ifndef SASFOCUS_DRC_HPP
#define SASFOCUS_DRC_HPP

#include "sasfocus/slc.hpp"

namespace sasfocus {

/// Schlick rational tone mapping anchored so the median magnitude maps to
/// 0.2. Magnitudes are first normalized by their maximum into [0, 1]:
///   q = (0.2 - 0.2 m) / (m - 0.2 m),  m = median(|g|) after normalization
///   out = q |g| / ((q - 1) |g| + 1)
/// Throws on an all-zero image or degenerate statistics (m = 0 or m = 1).
DrcImage drc(const SlcImage& g);

/// Same operator on a precomputed magnitude image.
DrcImage drc_magnitude(const RealImage& mag);

}  // namespace sasfocus

#endif
