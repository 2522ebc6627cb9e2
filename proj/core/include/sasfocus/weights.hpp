#ifndef SASFOCUS_WEIGHTS_HPP
#define SASFOCUS_WEIGHTS_HPP

#include "sasfocus/slc.hpp"

#include <string>

namespace sasfocus {

/// Non-negative mask applied to the magnitude image inside the sharpness
/// objective. Deterministic given its parameters.
struct WeightFn {
  enum class Kind { Identity, LowContrast };

  Kind kind = Kind::Identity;
  std::size_t window = 3;        // odd, >= 3
  double threshold_quantile = 0.5;  // in (0, 1)

  RealImage apply(const RealImage& mag) const;
};

/// w == 1 everywhere.
WeightFn weight_identity();

/// w = 0 where the local windowed standard deviation of the magnitude falls
/// strictly below the given quantile of its distribution, 1 elsewhere.
WeightFn weight_lowcontrast(std::size_t window, double threshold_quantile);

}  // namespace sasfocus

#endif
