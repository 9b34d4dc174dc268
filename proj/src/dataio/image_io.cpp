#include "mammo/dataio.hpp"

#include <png.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <algorithm>

namespace mammo {
namespace {

namespace fs = std::filesystem;

struct FileCloser {
  void operator()(std::FILE *f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// Skips whitespace and '#' comments in a PNM header.
void skip_pnm_space(std::istream &in) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      in.get();
    } else {
      return;
    }
  }
}

long read_pnm_int(std::istream &in, const fs::path &path) {
  skip_pnm_space(in);
  long v = -1;
  if (!(in >> v) || v < 0)
    throw DataError("malformed PGM header: " + path.string());
  return v;
}

Image load_pgm(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DataError("cannot open " + path.string());
  char magic[2] = {};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '5')
    throw DataError("unsupported PNM variant (expected P5): " + path.string());
  const long width = read_pnm_int(in, path);
  const long height = read_pnm_int(in, path);
  const long maxval = read_pnm_int(in, path);
  if (width == 0 || height == 0)
    throw DataError("zero-dimension image: " + path.string());
  if (maxval == 0 || maxval > 65535)
    throw DataError("unsupported PGM maxval: " + path.string());
  in.get(); // single whitespace before raster

  const bool wide = maxval > 255;
  const std::size_t bytes = static_cast<std::size_t>(width * height) * (wide ? 2 : 1);
  std::vector<unsigned char> raw(bytes);
  in.read(reinterpret_cast<char *>(raw.data()), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes)
    throw DataError("truncated PGM raster: " + path.string());

  Image img(height, width);
  const double top = static_cast<double>(maxval);
  for (long y = 0; y < height; ++y)
    for (long x = 0; x < width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y * width + x);
      unsigned v = wide ? (unsigned{raw[2 * i]} << 8) | raw[2 * i + 1] : raw[i];
      if (v > static_cast<unsigned>(maxval))
        throw DataError("PGM sample exceeds maxval: " + path.string());
      img(y, x) = v / top;
    }
  return img;
}

Image load_png(const fs::path &path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp)
    throw DataError("cannot open " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png)
    throw DataError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw DataError("libpng init failed");
  }
  Image img;
  std::string error;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("corrupt PNG: " + path.string());
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);

  if (color != PNG_COLOR_TYPE_GRAY)
    error = "PNG is not single-channel grayscale: ";
  else if (depth != 8 && depth != 16)
    error = "unsupported PNG bit depth: ";
  else if (width == 0 || height == 0)
    error = "zero-dimension image: ";

  if (error.empty()) {
    const std::size_t stride = png_get_rowbytes(png, info);
    std::vector<unsigned char> row(stride);
    img.resize(height, width);
    const double top = depth == 16 ? 65535.0 : 255.0;
    for (png_uint_32 y = 0; y < height; ++y) {
      png_read_row(png, row.data(), nullptr);
      for (png_uint_32 x = 0; x < width; ++x) {
        unsigned v = depth == 16 ? (unsigned{row[2 * x]} << 8) | row[2 * x + 1] : row[x];
        img(y, x) = v / top;
      }
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (!error.empty())
    throw DataError(error + path.string());
  return img;
}

bool has_png_signature(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::array<unsigned char, 8> sig{};
  in.read(reinterpret_cast<char *>(sig.data()), 8);
  return in.gcount() == 8 && png_sig_cmp(sig.data(), 0, 8) == 0;
}

} // namespace

Image load_image(const fs::path &path) {
  if (!fs::is_regular_file(path))
    throw DataError("no such file: " + path.string());
  if (has_png_signature(path))
    return load_png(path);
  return load_pgm(path);
}

void save_pgm(const Image &img, const fs::path &path, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16)
    throw std::invalid_argument("bit_depth must be 8 or 16");
  if (img.size() == 0)
    throw DataError("refusing to write an empty image");
  const unsigned maxval = bit_depth == 8 ? 255u : 65535u;
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw DataError("cannot write " + path.string());
  out << "P5\n" << img.cols() << ' ' << img.rows() << '\n' << maxval << '\n';
  std::vector<unsigned char> raw;
  raw.reserve(static_cast<std::size_t>(img.size()) * (bit_depth / 8));
  for (Eigen::Index y = 0; y < img.rows(); ++y)
    for (Eigen::Index x = 0; x < img.cols(); ++x) {
      const double v = std::clamp(img(y, x), 0.0, 1.0);
      const auto q = static_cast<unsigned>(std::lround(v * maxval));
      if (bit_depth == 16)
        raw.push_back(static_cast<unsigned char>(q >> 8));
      raw.push_back(static_cast<unsigned char>(q & 0xFF));
    }
  out.write(reinterpret_cast<const char *>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out)
    throw DataError("write failed: " + path.string());
}

} // namespace mammo
