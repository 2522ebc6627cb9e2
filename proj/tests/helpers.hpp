#ifndef SASFOCUS_TEST_HELPERS_HPP
#define SASFOCUS_TEST_HELPERS_HPP

#include "sasfocus/rng.hpp"
#include "sasfocus/slc.hpp"

#include <cmath>

namespace sasfocus::testing {

inline SlcImage random_slc(std::size_t m, std::uint64_t seed) {
  SplitMix64 rng(seed);
  SlcImage g(m, m);
  for (auto& z : g.data) z = cplx(rng.next_gaussian(), rng.next_gaussian());
  return g;
}

inline double rel_l2(const SlcImage& a, const SlcImage& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a.data[i] - b.data[i]);
    den += std::norm(b.data[i]);
  }
  return std::sqrt(num / den);
}

inline double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

}  // namespace sasfocus::testing

#endif
