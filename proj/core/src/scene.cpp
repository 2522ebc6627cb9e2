#include "sasfocus/scene.hpp"

#include "sasfocus/phase.hpp"
#include "sasfocus/rng.hpp"
#include "sasfocus/slc_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace sasfocus {

SlcImage gen_scene(const SceneSpec& spec) {
  if (!is_power_of_two(spec.size) || spec.size < 8)
    throw std::invalid_argument("scene size must be a power of two >= 8");
  const std::size_t m = spec.size;
  SplitMix64 rng(spec.seed);

  // Fully developed speckle: circular complex Gaussian, unit mean intensity.
  SlcImage g(m, m);
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double re = rng.next_gaussian() * inv_sqrt2;
    const double im = rng.next_gaussian() * inv_sqrt2;
    g.data[i] = cplx(re, im);
  }

  switch (spec.texture) {
    case SceneSpec::Texture::Flat:
      break;
    case SceneSpec::Texture::Ripple: {
      const auto& t = spec.ripple;
      if (t.depth < 0.0 || t.depth > 1.0)
        throw std::invalid_argument("ripple depth must be in [0, 1]");
      const double kx = std::cos(t.orientation) / t.wavelength_px;
      const double ky = std::sin(t.orientation) / t.wavelength_px;
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) {
          const double phase = 2.0 * std::numbers::pi *
                               (kx * static_cast<double>(r) + ky * static_cast<double>(c));
          g.at(r, c) *= 1.0 + t.depth * std::sin(phase);
        }
      break;
    }
    case SceneSpec::Texture::Shadow: {
      const double f = spec.shadow.fraction;
      if (f <= 0.0 || f >= 1.0)
        throw std::invalid_argument("shadow fraction must be in (0, 1)");
      const std::size_t width =
          std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(f * static_cast<double>(m))));
      const std::size_t start = rng.next_below(m - width + 1);
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = start; c < start + width; ++c) g.at(r, c) *= 0.1;
      break;
    }
  }

  if (spec.scatterer_count > 0) {
    double mean_amp = 0.0;
    for (const auto& z : g.data) mean_amp += std::abs(z);
    mean_amp /= static_cast<double>(g.size());
    const double amp = mean_amp * std::pow(10.0, spec.scatterer_snr_db / 20.0);
    for (std::size_t s = 0; s < spec.scatterer_count; ++s) {
      const std::size_t r = rng.next_below(m);
      const std::size_t c = rng.next_below(m);
      const double psi = rng.next_uniform(0.0, 2.0 * std::numbers::pi);
      g.at(r, c) += std::polar(amp, psi);
    }
  }
  return g;
}

CorruptionSpec sample_corruption(std::size_t m, std::uint64_t seed) {
  if (m < 2) throw std::invalid_argument("sample_corruption: M must be >= 2");
  SplitMix64 rng(seed);

  CorruptionSpec spec;
  spec.order = 2 + static_cast<int>(rng.next_below(9));

  double max_abs = 0.0;
  PhasePolynomial raw;
  do {
    spec.raw_coeffs.clear();
    raw = PhasePolynomial{};
    for (int d = PhasePolynomial::kMinDegree; d <= spec.order; ++d) {
      const double c = rng.next_uniform(-1.0, 1.0);
      spec.raw_coeffs.push_back(c);
      raw.coeff(d) = c;
    }
    const auto phi = eval_phase(raw, m);
    max_abs = 0.0;
    for (double v : phi) max_abs = std::max(max_abs, std::abs(v));
  } while (max_abs == 0.0);  // all-zero draw has probability zero

  spec.scale_rad = rng.next_uniform(-18.0, 18.0);
  const double factor = spec.scale_rad / max_abs;
  for (int d = PhasePolynomial::kMinDegree; d <= spec.order; ++d)
    spec.realized.coeff(d) = raw.coeff(d) * factor;
  return spec;
}

std::vector<const ManifestRecord*> DatasetManifest::split(const std::string& name) const {
  std::vector<const ManifestRecord*> out;
  for (const auto& rec : records)
    if (rec.split == name) out.push_back(&rec);
  return out;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SceneSpec derive_scene_spec(std::uint64_t base_seed, std::size_t index, std::size_t m) {
  SplitMix64 pr(derive_seed(base_seed, 3 * index));
  SceneSpec spec;
  spec.size = m;
  spec.seed = derive_seed(base_seed, 3 * index + 1);
  switch (pr.next_below(3)) {
    case 0:
      spec.texture = SceneSpec::Texture::Flat;
      break;
    case 1:
      spec.texture = SceneSpec::Texture::Ripple;
      spec.ripple.wavelength_px = pr.next_uniform(8.0, 32.0);
      spec.ripple.depth = pr.next_uniform(0.3, 0.9);
      spec.ripple.orientation = pr.next_uniform(0.0, std::numbers::pi);
      break;
    default:
      spec.texture = SceneSpec::Texture::Shadow;
      spec.shadow.fraction = pr.next_uniform(0.1, 0.4);
      break;
  }
  spec.scatterer_count = 5 + pr.next_below(11);
  spec.scatterer_snr_db = pr.next_uniform(20.0, 35.0);
  return spec;
}

}  // namespace

DatasetManifest build_dataset(std::size_t count_train, std::size_t count_val,
                              std::size_t count_test, std::uint64_t base_seed,
                              const std::filesystem::path& out_dir,
                              std::size_t image_size) {
  if (count_train < 1 || count_val < 1 || count_test < 1)
    throw std::invalid_argument("build_dataset: all split counts must be >= 1");
  std::filesystem::create_directories(out_dir);

  DatasetManifest manifest;
  manifest.root = out_dir;
  const std::size_t total = count_train + count_val + count_test;
  for (std::size_t i = 0; i < total; ++i) {
    const std::string split =
        i < count_train ? "train" : (i < count_train + count_val ? "val" : "test");
    char idbuf[32];
    std::snprintf(idbuf, sizeof(idbuf), "img_%04zu", i);

    ManifestRecord rec;
    rec.id = idbuf;
    rec.split = split;
    rec.gt_path = std::string("gt_") + idbuf + ".slc";
    rec.corrupt_path = std::string("corrupt_") + idbuf + ".slc";

    const SlcImage gt = gen_scene(derive_scene_spec(base_seed, i, image_size));
    rec.corruption = sample_corruption(image_size, derive_seed(base_seed, 3 * i + 2));
    const SlcImage corrupted = corrupt(gt, rec.corruption.realized);

    write_slc(gt, out_dir / rec.gt_path);
    write_slc(corrupted, out_dir / rec.corrupt_path);
    manifest.records.push_back(std::move(rec));
  }
  write_manifest(manifest, out_dir / "manifest.csv");
  return manifest;
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& csv_path) {
  std::ofstream os(csv_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot create " + csv_path.string());
  os << "id,split,gt_path,corrupt_path,order,scale_rad,c2,c3,c4,c5,c6,c7,c8,c9,c10\n";
  for (const auto& rec : manifest.records) {
    os << rec.id << ',' << rec.split << ',' << rec.gt_path.string() << ','
       << rec.corrupt_path.string() << ',' << rec.corruption.order << ','
       << format_double(rec.corruption.scale_rad);
    for (int d = PhasePolynomial::kMinDegree; d <= PhasePolynomial::kMaxDegree; ++d)
      os << ',' << format_double(rec.corruption.realized.coeff(d));
    os << '\n';
  }
}

DatasetManifest read_manifest(const std::filesystem::path& csv_path) {
  std::ifstream is(csv_path);
  if (!is) throw std::runtime_error("cannot open " + csv_path.string());

  DatasetManifest manifest;
  manifest.root = csv_path.parent_path();

  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty manifest " + csv_path.string());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 15)
      throw std::runtime_error("malformed manifest row: " + line);

    ManifestRecord rec;
    rec.id = fields[0];
    rec.split = fields[1];
    rec.gt_path = fields[2];
    rec.corrupt_path = fields[3];
    rec.corruption.order = std::stoi(fields[4]);
    rec.corruption.scale_rad = std::stod(fields[5]);
    for (int d = PhasePolynomial::kMinDegree; d <= PhasePolynomial::kMaxDegree; ++d)
      rec.corruption.realized.coeff(d) = std::stod(fields[6 + d - 2]);
    manifest.records.push_back(std::move(rec));
  }
  return manifest;
}

}  // namespace sasfocus
