#include "sasfocus/fft.hpp"
#include "sasfocus/gd.hpp"
#include "sasfocus/phase.hpp"
#include "sasfocus/scene.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"

using namespace sasfocus;
using sasfocus::testing::random_slc;
using sasfocus::testing::rel_l2;

namespace {

SlcImage quadratic_fixture(std::size_t m, double c2, std::uint64_t seed) {
  SceneSpec spec;
  spec.size = m;
  spec.seed = seed;
  spec.scatterer_count = 8;
  spec.scatterer_snr_db = 30.0;
  PhasePolynomial p;
  p.coeff(2) = c2;
  return corrupt(gen_scene(spec), p);
}

}  // namespace

TEST_CASE("weight_identity is all ones") {
  const RealImage mag = magnitude(random_slc(16, 2));
  const RealImage w = weight_identity().apply(mag);
  for (double v : w.data) CHECK(v == 1.0);
}

TEST_CASE("lowcontrast weight on a constant image keeps everything") {
  // local stddev is 0 everywhere; the strict < tie-break keeps w == 1
  const RealImage mag(16, 16, 3.0);
  const RealImage w = weight_lowcontrast(3, 0.5).apply(mag);
  for (double v : w.data) CHECK(v == 1.0);
}

TEST_CASE("lowcontrast weight masks the flat half of a split image") {
  RealImage mag(32, 32, 1.0);
  SplitMix64 rng(4);
  for (std::size_t r = 0; r < 32; ++r)
    for (std::size_t c = 16; c < 32; ++c) mag.at(r, c) = rng.next_uniform(0.0, 2.0);
  const RealImage w = weight_lowcontrast(3, 0.5).apply(mag);
  // interior of the flat half masked; speckled half mostly kept
  std::size_t kept = 0, total = 0;
  for (std::size_t r = 2; r < 30; ++r) {
    for (std::size_t c = 2; c < 14; ++c) CHECK(w.at(r, c) == 0.0);
    for (std::size_t c = 18; c < 30; ++c) {
      kept += w.at(r, c) == 1.0;
      ++total;
    }
  }
  CHECK(static_cast<double>(kept) / static_cast<double>(total) > 0.9);
}

TEST_CASE("weight parameter validation") {
  CHECK_THROWS_AS(weight_lowcontrast(4, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(weight_lowcontrast(1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(weight_lowcontrast(3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(weight_lowcontrast(3, 1.0), std::invalid_argument);
}

TEST_CASE("focus_gd runs exactly `iterations` updates") {
  const SlcImage g_e = quadratic_fixture(32, 3.0, 5);
  GdConfig cfg;
  cfg.iterations = 1;
  cfg.learning_rate = 1e-6;
  const FocusResult r = focus_gd(g_e, cfg);
  CHECK(r.trace.size() == 1);
}

TEST_CASE("zero gradient is a fixed point") {
  // columns constant along-track -> spectrum has only the DC bin, which a
  // unit-modulus phase rotation cannot reshape
  SlcImage g(16, 16);
  SplitMix64 rng(12);
  for (std::size_t c = 0; c < 16; ++c) {
    const cplx v(1.0 + rng.next_double(), rng.next_double());
    for (std::size_t r = 0; r < 16; ++r) g.at(r, c) = v;
  }
  GdConfig cfg;
  cfg.metric = MetricKind::ssi();
  cfg.learning_rate = 1e-2;
  cfg.iterations = 3;
  const FocusResult r = focus_gd(g, cfg);
  for (int k = 0; k < PhasePolynomial::kCoeffCount; ++k)
    CHECK(std::abs(r.phi_hat.coeffs[k]) < 1e-12);
  CHECK(rel_l2(r.g_hat, g) < 1e-10);
}

TEST_CASE("focus_gd improves a quadratic corruption and is consistent") {
  const SlcImage gt = gen_scene({.size = 64, .seed = 21, .scatterer_count = 10,
                                 .scatterer_snr_db = 30.0});
  PhasePolynomial p;
  p.coeff(2) = 5.0;
  const SlcImage g_e = corrupt(gt, p);

  GdConfig cfg;
  cfg.metric = MetricKind::mns();
  cfg.iterations = 10;
  cfg.learning_rate = crossval_lr({g_e}, cfg.metric, default_lr_grid(), 10);
  const FocusResult r = focus_gd(g_e, cfg);

  CHECK(mns(r.g_hat) > mns(g_e));

  std::size_t non_increasing = 0;
  double prev = -objective_value(cfg.metric, magnitude(g_e));
  for (double v : r.trace) {
    if (v <= prev + 1e-12) ++non_increasing;
    prev = v;
  }
  CHECK(non_increasing >= 8);

  // result must equal the slc-core correction with the returned coefficients
  CHECK(rel_l2(r.g_hat, correct(g_e, r.phi_hat)) == 0.0);
}

TEST_CASE("focus_gd is deterministic") {
  const SlcImage g_e = quadratic_fixture(32, 4.0, 9);
  GdConfig cfg;
  cfg.learning_rate = 1e-4;
  const FocusResult a = focus_gd(g_e, cfg);
  const FocusResult b = focus_gd(g_e, cfg);
  CHECK(a.trace == b.trace);
  for (std::size_t i = 0; i < a.g_hat.size(); ++i)
    CHECK(a.g_hat.data[i] == b.g_hat.data[i]);
}

TEST_CASE("constant-offset corruptions give identical magnitudes") {
  const SlcImage gt = gen_scene({.size = 32, .seed = 33, .scatterer_count = 6,
                                 .scatterer_snr_db = 25.0});
  PhasePolynomial p;
  p.coeff(2) = 2.0;
  const SlcImage a = corrupt(gt, p);
  // a global phase offset on top of the same error
  const ApertureSpectrum G = fft_along_track(gt);
  auto phi = eval_phase(p, 32);
  for (double& v : phi) v += 1.1;
  const SlcImage b = ifft_along_track(apply_phase(G, phi, +1));

  GdConfig cfg;
  cfg.learning_rate = 1e-4;
  cfg.iterations = 5;
  const FocusResult ra = focus_gd(a, cfg);
  const FocusResult rb = focus_gd(b, cfg);
  for (std::size_t i = 0; i < ra.g_hat.size(); ++i)
    CHECK(std::abs(ra.g_hat.data[i]) ==
          doctest::Approx(std::abs(rb.g_hat.data[i])).epsilon(1e-9));
}

TEST_CASE("crossval_lr basics") {
  const SlcImage g_e = quadratic_fixture(32, 3.0, 41);
  SUBCASE("single-element grid returns it") {
    CHECK(crossval_lr({g_e}, MetricKind::mns(), {0.125}) == 0.125);
  }
  SUBCASE("default grid spans the ten decades") {
    const auto grid = default_lr_grid();
    REQUIRE(grid.size() == 10);
    CHECK(grid.front() == doctest::Approx(1e-6));
    CHECK(grid.back() == doctest::Approx(1e3));
  }
  SUBCASE("choice is invariant to image order") {
    const SlcImage g2 = quadratic_fixture(32, -2.0, 42);
    const auto grid = default_lr_grid();
    CHECK(crossval_lr({g_e, g2}, MetricKind::mns(), grid) ==
          crossval_lr({g2, g_e}, MetricKind::mns(), grid));
  }
  SUBCASE("empty inputs throw") {
    CHECK_THROWS_AS(crossval_lr({}, MetricKind::mns(), {1e-3}), std::invalid_argument);
    CHECK_THROWS_AS(crossval_lr({g_e}, MetricKind::mns(), {}), std::invalid_argument);
  }
}
