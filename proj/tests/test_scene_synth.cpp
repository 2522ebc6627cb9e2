#include "sasfocus/metrics.hpp"
#include "sasfocus/phase.hpp"
#include "sasfocus/scene.hpp"
#include "sasfocus/slc_io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"

using namespace sasfocus;
using sasfocus::testing::rel_l2;

TEST_CASE("gen_scene is deterministic in the seed") {
  SceneSpec spec;
  spec.size = 32;
  spec.seed = 1234;
  spec.scatterer_count = 4;
  const SlcImage a = gen_scene(spec);
  const SlcImage b = gen_scene(spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.data[i] == b.data[i]);
}

TEST_CASE("flat speckle has unit mean intensity") {
  SceneSpec spec;
  spec.size = 256;
  spec.seed = 88;
  spec.scatterer_count = 0;
  const SlcImage g = gen_scene(spec);
  double intensity = 0.0;
  for (const auto& z : g.data) intensity += std::norm(z);
  intensity /= static_cast<double>(g.size());
  CHECK(intensity == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("30 dB scatterers rise well above the background") {
  SceneSpec spec;
  spec.size = 64;
  spec.seed = 17;
  spec.scatterer_count = 3;
  spec.scatterer_snr_db = 30.0;
  const SlcImage g = gen_scene(spec);

  SceneSpec bg_spec = spec;
  bg_spec.scatterer_count = 0;
  const SlcImage bg = gen_scene(bg_spec);
  double bg_mean = 0.0;
  for (const auto& z : bg.data) bg_mean += std::abs(z);
  bg_mean /= static_cast<double>(bg.size());

  double brightest = 0.0;
  for (const auto& z : g.data) brightest = std::max(brightest, std::abs(z));
  CHECK(brightest >= 10.0 * bg_mean);
}

TEST_CASE("ripple and shadow textures shape the amplitude") {
  SceneSpec spec;
  spec.size = 64;
  spec.seed = 3;
  spec.scatterer_count = 0;
  spec.texture = SceneSpec::Texture::Shadow;
  spec.shadow.fraction = 0.25;
  const SlcImage g = gen_scene(spec);
  // a contiguous quarter of the range columns is strongly attenuated
  std::vector<double> col_energy(64, 0.0);
  for (std::size_t r = 0; r < 64; ++r)
    for (std::size_t c = 0; c < 64; ++c) col_energy[c] += std::norm(g.at(r, c));
  std::size_t dark = 0;
  for (double e : col_energy)
    if (e < 0.05 * 64.0) ++dark;
  CHECK(dark == 16);
}

TEST_CASE("sample_corruption realizes the drawn scale exactly") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 99ULL, 12345ULL}) {
    const CorruptionSpec spec = sample_corruption(256, seed);
    CHECK(spec.order >= 2);
    CHECK(spec.order <= 10);
    CHECK(std::abs(spec.scale_rad) <= 18.0);
    const auto phi = eval_phase(spec.realized, 256);
    double max_abs = 0.0;
    for (double v : phi) max_abs = std::max(max_abs, std::abs(v));
    CHECK(max_abs == doctest::Approx(std::abs(spec.scale_rad)).epsilon(1e-9));
    // degrees above the order stay zero
    for (int d = spec.order + 1; d <= 10; ++d) CHECK(spec.realized.coeff(d) == 0.0);
  }
}

TEST_CASE("corruption sampler distributions (Monte Carlo)") {
  std::size_t order_counts[11] = {};
  double scale_sum = 0.0;
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) {
    const CorruptionSpec spec = sample_corruption(16, derive_seed(0xC0FFEE, i));
    ++order_counts[static_cast<std::size_t>(spec.order)];
    scale_sum += spec.scale_rad;
    CHECK(std::abs(spec.scale_rad) <= 18.0);
  }
  for (int o = 2; o <= 10; ++o) {
    const double freq =
        static_cast<double>(order_counts[static_cast<std::size_t>(o)]) / static_cast<double>(n);
    CHECK(std::abs(freq - 1.0 / 9.0) < 0.02);
  }
  CHECK(std::abs(scale_sum / static_cast<double>(n)) < 0.2);
}

TEST_CASE("corrupt is invertible and energy preserving") {
  SceneSpec spec;
  spec.size = 32;
  spec.seed = 7;
  spec.scatterer_count = 5;
  const SlcImage g = gen_scene(spec);

  SUBCASE("zero polynomial is identity") {
    CHECK(rel_l2(corrupt(g, PhasePolynomial{}), g) < 1e-12);
  }
  SUBCASE("corrupt then correct recovers") {
    const CorruptionSpec c = sample_corruption(32, 5);
    CHECK(rel_l2(correct(corrupt(g, c.realized), c.realized), g) < 1e-10);
  }
  SUBCASE("energy preserved") {
    const CorruptionSpec c = sample_corruption(32, 6);
    const SlcImage ge = corrupt(g, c.realized);
    double e0 = 0.0, e1 = 0.0;
    for (const auto& z : g.data) e0 += std::norm(z);
    for (const auto& z : ge.data) e1 += std::norm(z);
    CHECK(e1 == doctest::Approx(e0).epsilon(1e-9));
  }
  SUBCASE("nonzero corruption changes the sharpness") {
    const CorruptionSpec c = sample_corruption(32, 8);
    CHECK(mns(corrupt(g, c.realized)) != mns(g));
  }
}

TEST_CASE("build_dataset is reproducible and self-consistent") {
  namespace fs = std::filesystem;
  const fs::path dir_a = fs::temp_directory_path() / "sasfocus_ds_a";
  const fs::path dir_b = fs::temp_directory_path() / "sasfocus_ds_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);

  const DatasetManifest ma = build_dataset(2, 2, 3, 42, dir_a, 32);
  const DatasetManifest mb = build_dataset(2, 2, 3, 42, dir_b, 32);
  REQUIRE(ma.records.size() == 7);
  CHECK(ma.split("train").size() == 2);
  CHECK(ma.split("val").size() == 2);
  CHECK(ma.split("test").size() == 3);

  // identical seeds give byte-identical manifests
  const auto read_file = [](const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), {});
  };
  CHECK(read_file(dir_a / "manifest.csv") == read_file(dir_b / "manifest.csv"));

  // correcting each corrupted file with its stored polynomial recovers gt
  const DatasetManifest loaded = read_manifest(dir_a / "manifest.csv");
  for (const auto& rec : loaded.records) {
    const SlcImage gt = read_slc(loaded.root / rec.gt_path);
    const SlcImage ge = read_slc(loaded.root / rec.corrupt_path);
    CHECK(rel_l2(correct(ge, rec.corruption.realized), gt) < 1e-6);
  }
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}
