#include "sasfocus/slc_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace sasfocus {

static_assert(std::endian::native == std::endian::little,
              "SLC1/PGM I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'S', 'L', 'C', '1'};

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}

std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}

}  // namespace

SlcImage read_slc(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());

  char magic[4] = {};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("bad SLC1 magic in " + path.string());

  const std::uint32_t rows = read_u32(is);
  const std::uint32_t cols = read_u32(is);
  if (!is) throw std::runtime_error("truncated SLC1 header in " + path.string());

  SlcImage g(rows, cols);
  std::vector<float> buf(static_cast<std::size_t>(rows) * cols * 2);
  is.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!is) throw std::runtime_error("truncated SLC1 payload in " + path.string());

  for (std::size_t i = 0; i < g.size(); ++i) {
    const float re = buf[2 * i], im = buf[2 * i + 1];
    if (!std::isfinite(re) || !std::isfinite(im))
      throw std::runtime_error("non-finite sample in " + path.string());
    g.data[i] = cplx(re, im);
  }
  return g;
}

void write_slc(const SlcImage& g, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot create " + path.string());
  os.write(kMagic, 4);
  write_u32(os, static_cast<std::uint32_t>(g.rows));
  write_u32(os, static_cast<std::uint32_t>(g.cols));
  std::vector<float> buf(g.size() * 2);
  for (std::size_t i = 0; i < g.size(); ++i) {
    buf[2 * i] = static_cast<float>(g.data[i].real());
    buf[2 * i + 1] = static_cast<float>(g.data[i].imag());
  }
  os.write(reinterpret_cast<const char*>(buf.data()),
           static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

void write_pgm(const RealImage& img, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot create " + path.string());
  os << "P5\n" << img.cols << " " << img.rows << "\n255\n";
  std::vector<unsigned char> buf(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double v = std::clamp(img.data[i], 0.0, 1.0);
    buf[i] = static_cast<unsigned char>(std::lround(255.0 * v));
  }
  os.write(reinterpret_cast<const char*>(buf.data()),
           static_cast<std::streamsize>(buf.size()));
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace sasfocus
