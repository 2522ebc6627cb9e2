#ifndef SASFOCUS_SCENE_HPP
#define SASFOCUS_SCENE_HPP

#include "sasfocus/slc.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sasfocus {

struct RippleTexture {
  double wavelength_px = 16.0;
  double depth = 0.5;        // in [0, 1]
  double orientation = 0.0;  // radians
};

struct ShadowTexture {
  double fraction = 0.25;  // in (0, 1)
};

struct SceneSpec {
  enum class Texture { Flat, Ripple, Shadow };

  std::size_t size = 256;  // power of two
  std::uint64_t seed = 0;
  std::size_t scatterer_count = 0;
  double scatterer_snr_db = 30.0;
  Texture texture = Texture::Flat;
  RippleTexture ripple;
  ShadowTexture shadow;
};

/// Speckle (unit mean intensity circular complex Gaussian) shaped by the
/// texture amplitude profile, plus isolated point scatterers. Deterministic
/// in the seed.
SlcImage gen_scene(const SceneSpec& spec);

struct CorruptionSpec {
  int order = 2;                   // in {2..10}
  std::vector<double> raw_coeffs;  // degrees 2..order, each in [-1, 1]
  double scale_rad = 0.0;          // in [-18, 18]
  PhasePolynomial realized;        // normalized and scaled coefficients
};

/// Random low-frequency phase error: uniform order in {2..10}, raw
/// coefficients U[-1,1], polynomial normalized to unit max |phi| on the
/// M-point grid, then scaled by U[-18,18] radians.
CorruptionSpec sample_corruption(std::size_t m, std::uint64_t seed);

struct ManifestRecord {
  std::string id;
  std::string split;  // train | val | test
  std::filesystem::path gt_path;
  std::filesystem::path corrupt_path;
  CorruptionSpec corruption;
};

struct DatasetManifest {
  std::filesystem::path root;  // directory the paths are relative to
  std::vector<ManifestRecord> records;

  std::vector<const ManifestRecord*> split(const std::string& name) const;
};

/// Generates scenes with per-index derived seeds, corrupts each exactly
/// once, writes SLC1 files plus a manifest CSV under out_dir.
DatasetManifest build_dataset(std::size_t count_train, std::size_t count_val,
                              std::size_t count_test, std::uint64_t base_seed,
                              const std::filesystem::path& out_dir,
                              std::size_t image_size = 256);

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& csv_path);
DatasetManifest read_manifest(const std::filesystem::path& csv_path);

}  // namespace sasfocus

#endif
