#include "sasfocus/drc.hpp"
#include "sasfocus/fft.hpp"
#include "sasfocus/phase.hpp"
#include "sasfocus/slc_io.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "helpers.hpp"

using namespace sasfocus;
using sasfocus::testing::random_slc;
using sasfocus::testing::rel_l2;

TEST_CASE("fft of a constant column concentrates at DC") {
  SlcImage g(8, 8);
  for (auto& z : g.data) z = cplx(1.0, 0.0);
  const ApertureSpectrum G = fft_along_track(g);
  for (std::size_t c = 0; c < 8; ++c) {
    CHECK(std::abs(G.at(0, c) - cplx(std::sqrt(8.0), 0.0)) < 1e-12);
    for (std::size_t n = 1; n < 8; ++n) CHECK(std::abs(G.at(n, c)) < 1e-12);
  }
}

TEST_CASE("fft then ifft round-trips") {
  const SlcImage g = random_slc(32, 7);
  CHECK(rel_l2(ifft_along_track(fft_along_track(g)), g) < 1e-10);
}

TEST_CASE("unit impulse at index 0 has flat spectrum magnitude") {
  SlcImage g(8, 8);
  for (std::size_t c = 0; c < 8; ++c) g.at(0, c) = cplx(1.0, 0.0);
  const ApertureSpectrum G = fft_along_track(g);
  for (std::size_t n = 0; n < 8; ++n)
    CHECK(std::abs(G.at(n, 3)) == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-12));
}

TEST_CASE("fft rejects non-power-of-two sizes") {
  SlcImage g(12, 12);
  CHECK_THROWS_AS(fft_along_track(g), std::invalid_argument);
}

TEST_CASE("ifft of zero spectrum is zero, and ifft is linear") {
  const ApertureSpectrum zero(16, 16);
  const SlcImage z = ifft_along_track(zero);
  for (const auto& v : z.data) CHECK(std::abs(v) == 0.0);

  const ApertureSpectrum g1 = random_slc(16, 1), g2 = random_slc(16, 2);
  const cplx a(2.0, -1.0), b(0.5, 3.0);
  ApertureSpectrum combo(16, 16);
  for (std::size_t i = 0; i < combo.size(); ++i)
    combo.data[i] = a * g1.data[i] + b * g2.data[i];
  const SlcImage lhs = ifft_along_track(combo);
  const SlcImage i1 = ifft_along_track(g1), i2 = ifft_along_track(g2);
  SlcImage rhs(16, 16);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs.data[i] = a * i1.data[i] + b * i2.data[i];
  CHECK(rel_l2(lhs, rhs) < 1e-10);
}

TEST_CASE("parseval holds for the unitary transform") {
  const SlcImage g = random_slc(64, 5);
  const ApertureSpectrum G = fft_along_track(g);
  double eg = 0.0, eG = 0.0;
  for (const auto& z : g.data) eg += std::norm(z);
  for (const auto& z : G.data) eG += std::norm(z);
  CHECK(eG == doctest::Approx(eg).epsilon(1e-9));
}

TEST_CASE("eval_phase on hand-evaluated monomials") {
  PhasePolynomial p;
  SUBCASE("all zero") {
    const auto phi = eval_phase(p, 16);
    for (double v : phi) CHECK(v == 0.0);
  }
  SUBCASE("quadratic at M=3") {
    p.coeff(2) = 1.0;
    const auto phi = eval_phase(p, 3);
    CHECK(phi[0] == doctest::Approx(1.0));
    CHECK(phi[1] == doctest::Approx(0.0));
    CHECK(phi[2] == doctest::Approx(1.0));
  }
  SUBCASE("cubic at M=3") {
    p.coeff(3) = 2.0;
    const auto phi = eval_phase(p, 3);
    CHECK(phi[0] == doctest::Approx(-2.0));
    CHECK(phi[1] == doctest::Approx(0.0));
    CHECK(phi[2] == doctest::Approx(2.0));
  }
}

TEST_CASE("eval_phase is linear in the coefficients") {
  SplitMix64 rng(99);
  PhasePolynomial p1, p2, combo;
  for (int d = 2; d <= 10; ++d) {
    p1.coeff(d) = rng.next_uniform(-1, 1);
    p2.coeff(d) = rng.next_uniform(-1, 1);
    combo.coeff(d) = 2.5 * p1.coeff(d) - 0.75 * p2.coeff(d);
  }
  const auto a = eval_phase(p1, 33), b = eval_phase(p2, 33), c = eval_phase(combo, 33);
  for (std::size_t n = 0; n < 33; ++n)
    CHECK(c[n] == doctest::Approx(2.5 * a[n] - 0.75 * b[n]).epsilon(1e-12));
}

TEST_CASE("apply_phase identities") {
  const ApertureSpectrum G = random_slc(16, 11);
  SUBCASE("zero phase is the identity") {
    const auto out = apply_phase(G, std::vector<double>(16, 0.0), +1);
    CHECK(rel_l2(out, G) == 0.0);
  }
  SUBCASE("apply then undo") {
    std::vector<double> phi(16);
    SplitMix64 rng(3);
    for (auto& v : phi) v = rng.next_uniform(-10, 10);
    const auto out = apply_phase(apply_phase(G, phi, +1), phi, -1);
    CHECK(rel_l2(out, G) < 1e-12);
  }
  SUBCASE("constant phase is a global rotation") {
    const std::vector<double> phi(16, 0.7);
    const auto out = apply_phase(G, phi, +1);
    const cplx rot = std::polar(1.0, 0.7);
    for (std::size_t i = 0; i < G.size(); ++i)
      CHECK(std::abs(out.data[i] - rot * G.data[i]) < 1e-12);
  }
  SUBCASE("length mismatch throws") {
    CHECK_THROWS_AS(apply_phase(G, std::vector<double>(15, 0.0), +1),
                    std::invalid_argument);
  }
}

TEST_CASE("constant aperture phase leaves the image magnitude unchanged") {
  // degree-0 errors are invisible to sharpness, hence excluded from the model
  const SlcImage g = random_slc(32, 17);
  const ApertureSpectrum G = fft_along_track(g);
  const SlcImage shifted = ifft_along_track(apply_phase(G, std::vector<double>(32, 1.3), +1));
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(std::abs(std::abs(shifted.data[i]) - std::abs(g.data[i])) < 1e-12);
}

TEST_CASE("integer-bin linear phase ramp cyclically shifts along-track") {
  // degree-1 errors only translate the scene, hence also excluded
  const SlcImage g = random_slc(16, 23);
  const ApertureSpectrum G = fft_along_track(g);
  const int k = 3;
  std::vector<double> phi(16);
  for (std::size_t n = 0; n < 16; ++n)
    phi[n] = 2.0 * std::numbers::pi * k * static_cast<double>(n) / 16.0;
  const SlcImage shifted = ifft_along_track(apply_phase(G, phi, +1));
  for (std::size_t r = 0; r < 16; ++r)
    for (std::size_t c = 0; c < 16; ++c)
      CHECK(std::abs(shifted.at(r, c) - g.at((r + k) % 16, c)) < 1e-9);
}

TEST_CASE("drc pins median to 0.2, max to 1, zero to 0") {
  SlcImage g(8, 8);
  // odd-rank-free construction: exact median value present many times
  for (std::size_t i = 0; i < g.size(); ++i) g.data[i] = cplx(0.5, 0.0);
  g.data[0] = cplx(0.0, 0.0);
  g.data[1] = cplx(1.0, 0.0);
  const DrcImage d = drc(g);
  CHECK(d.data[0] == doctest::Approx(0.0));
  CHECK(d.data[1] == doctest::Approx(1.0));
  CHECK(d.data[5] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("drc is monotone in magnitude and bounded in [0,1]") {
  const SlcImage g = random_slc(16, 31);
  const DrcImage d = drc(g);
  const RealImage mag = magnitude(g);
  for (double v : d.data) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  for (std::size_t i = 1; i < d.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (mag.data[i] > mag.data[j]) CHECK(d.data[i] >= d.data[j]);
}

TEST_CASE("drc rejects degenerate inputs") {
  SlcImage zero(8, 8);
  CHECK_THROWS_AS(drc(zero), std::invalid_argument);
  SlcImage flat(8, 8);
  for (auto& z : flat.data) z = cplx(2.0, 0.0);  // median == max
  CHECK_THROWS_AS(drc(flat), std::invalid_argument);
}

TEST_CASE("phase_map conventions") {
  SlcImage g(8, 8);
  g.data[0] = cplx(3.0, 0.0);    // positive real
  g.data[1] = cplx(0.0, 2.0);    // i*a
  g.data[2] = cplx(-5.0, 0.0);   // negative real: -pi branch
  g.data[3] = cplx(0.0, 0.0);    // arg(0) := 0
  const RealImage pm = phase_map(g);
  CHECK(pm.data[0] == doctest::Approx(0.0));
  CHECK(pm.data[1] == doctest::Approx(0.5));
  CHECK(pm.data[2] == doctest::Approx(-1.0));
  CHECK(pm.data[3] == doctest::Approx(0.0));
  for (double v : pm.data) {
    CHECK(v >= -1.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("SLC1 write/read round trip is bit exact") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sasfocus_io_test";
  fs::create_directories(dir);
  const fs::path p = dir / "roundtrip.slc";

  SlcImage g = random_slc(16, 47);
  // force float32-representable samples so the round trip is exact
  for (auto& z : g.data)
    z = cplx(static_cast<float>(z.real()), static_cast<float>(z.imag()));
  write_slc(g, p);
  const SlcImage back = read_slc(p);
  REQUIRE(back.rows == g.rows);
  REQUIRE(back.cols == g.cols);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(back.data[i] == g.data[i]);
  fs::remove_all(dir);
}

TEST_CASE("SLC1 rejects bad magic and truncated payloads") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sasfocus_io_bad";
  fs::create_directories(dir);

  {
    std::ofstream os(dir / "bad_magic.slc", std::ios::binary);
    os << "XXXX" << std::string(16, '\0');
  }
  CHECK_THROWS_WITH_AS(read_slc(dir / "bad_magic.slc"),
                       doctest::Contains("bad SLC1 magic"), std::runtime_error);

  {
    std::ofstream os(dir / "short.slc", std::ios::binary);
    os << "SLC1";
    const std::uint32_t dim = 256;
    os.write(reinterpret_cast<const char*>(&dim), 4);
    os.write(reinterpret_cast<const char*>(&dim), 4);
    os << std::string(64, '\0');  // far short of 256*256*8 bytes
  }
  CHECK_THROWS_WITH_AS(read_slc(dir / "short.slc"), doctest::Contains("truncated"),
                       std::runtime_error);
  fs::remove_all(dir);
}
