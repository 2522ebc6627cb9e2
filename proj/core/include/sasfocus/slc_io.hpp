#ifndef SASFOCUS_SLC_IO_HPP
#define SASFOCUS_SLC_IO_HPP

#include "sasfocus/slc.hpp"

#include <filesystem>
#include <string>

namespace sasfocus {

/// SLC1 binary format, little-endian:
///   magic "SLC1", u32 rows, u32 cols, rows*cols float32 (re, im) pairs,
///   row-major.
SlcImage read_slc(const std::filesystem::path& path);
void write_slc(const SlcImage& g, const std::filesystem::path& path);

/// Binary PGM (P5), 8-bit, value = round(255 * v) with v clamped to [0, 1].
void write_pgm(const RealImage& img, const std::filesystem::path& path);

}  // namespace sasfocus

#endif
