#include "gesture/image.hpp"

#include <png.h>
#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>

#include "gesture/error.hpp"

namespace gesture {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return f;
}

[[noreturn]] void png_fail(png_structp png, png_const_charp msg) {
  (void)png;
  throw Error(ErrorCode::IoError, std::string("libpng: ") + msg);
}

void png_warn(png_structp, png_const_charp) {}

class PngReader {
 public:
  explicit PngReader(const std::filesystem::path& path) : file_(open_file(path, "rb")), path_(path) {
    png_ = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
    info_ = png_create_info_struct(png_);
    png_init_io(png_, file_.get());
    png_read_info(png_, info_);
  }
  ~PngReader() { png_destroy_read_struct(&png_, &info_, nullptr); }
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;

  int width() const { return static_cast<int>(png_get_image_width(png_, info_)); }
  int height() const { return static_cast<int>(png_get_image_height(png_, info_)); }
  int bit_depth() const { return png_get_bit_depth(png_, info_); }
  int color_type() const { return png_get_color_type(png_, info_); }

  png_structp png() { return png_; }
  png_infop info() { return info_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  FilePtr file_;
  std::filesystem::path path_;
  png_structp png_ = nullptr;
  png_infop info_ = nullptr;
};

class PngWriter {
 public:
  explicit PngWriter(const std::filesystem::path& path) : file_(open_file(path, "wb")) {
    png_ = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
    info_ = png_create_info_struct(png_);
    png_init_io(png_, file_.get());
  }
  ~PngWriter() { png_destroy_write_struct(&png_, &info_); }
  PngWriter(const PngWriter&) = delete;
  PngWriter& operator=(const PngWriter&) = delete;

  void write(int w, int h, int bit_depth, int color_type, int level, const std::vector<png_bytep>& rows) {
    png_set_IHDR(png_, info_, w, h, bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png_, level);
    if (level <= 1) png_set_filter(png_, 0, PNG_FILTER_SUB), png_set_compression_strategy(png_, Z_RLE);
    png_write_info(png_, info_);
    png_write_image(png_, const_cast<png_bytepp>(rows.data()));
    png_write_end(png_, nullptr);
  }

  png_structp png() { return png_; }

 private:
  FilePtr file_;
  png_structp png_ = nullptr;
  png_infop info_ = nullptr;
};

}  // namespace

RgbImage read_png_rgb(const std::filesystem::path& path) {
  PngReader r(path);
  png_structp png = r.png();
  if (r.bit_depth() == 16) png_set_strip_16(png);
  if (r.color_type() == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (r.color_type() == PNG_COLOR_TYPE_GRAY || r.color_type() == PNG_COLOR_TYPE_GRAY_ALPHA) {
    if (r.bit_depth() < 8) png_set_expand_gray_1_2_4_to_8(png);
    png_set_gray_to_rgb(png);
  }
  if (r.color_type() & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, r.info());

  RgbImage img(r.width(), r.height());
  std::vector<png_bytep> rows(img.height);
  for (int v = 0; v < img.height; ++v) rows[v] = img.at(0, v);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  return img;
}

void write_png_rgb(const std::filesystem::path& path, const RgbImage& img, int compression_level) {
  PngWriter w(path);
  std::vector<png_bytep> rows(img.height);
  for (int v = 0; v < img.height; ++v) rows[v] = const_cast<png_bytep>(img.at(0, v));
  w.write(img.width, img.height, 8, PNG_COLOR_TYPE_RGB, compression_level, rows);
}

DepthMap read_png_depth(const std::filesystem::path& path, double depth_scale) {
  PngReader r(path);
  if (r.color_type() != PNG_COLOR_TYPE_GRAY || r.bit_depth() != 16)
    throw Error(ErrorCode::ParseError, path.string() + ": depth must be 16-bit grayscale");
  png_structp png = r.png();
  png_set_swap(png);  // host little-endian
  png_read_update_info(png, r.info());

  const int w = r.width();
  const int h = r.height();
  std::vector<std::uint16_t> raw(static_cast<std::size_t>(w) * h);
  std::vector<png_bytep> rows(h);
  for (int v = 0; v < h; ++v) rows[v] = reinterpret_cast<png_bytep>(raw.data() + static_cast<std::size_t>(v) * w);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);

  DepthMap depth(h, w);
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u)
      depth(v, u) = static_cast<float>(raw[static_cast<std::size_t>(v) * w + u] * depth_scale);
  return depth;
}

void write_png_depth(const std::filesystem::path& path, const DepthMap& depth, double depth_scale) {
  const int h = static_cast<int>(depth.rows());
  const int w = static_cast<int>(depth.cols());
  std::vector<std::uint16_t> raw(static_cast<std::size_t>(w) * h);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const double units = std::round(depth(v, u) / depth_scale);
      const auto d = static_cast<std::uint16_t>(std::clamp(units, 0.0, 65535.0));
      raw[static_cast<std::size_t>(v) * w + u] = static_cast<std::uint16_t>((d >> 8) | (d << 8));  // PNG is big-endian
    }
  }
  PngWriter wr(path);
  std::vector<png_bytep> rows(h);
  for (int v = 0; v < h; ++v) rows[v] = reinterpret_cast<png_bytep>(raw.data() + static_cast<std::size_t>(v) * w);
  wr.write(w, h, 16, PNG_COLOR_TYPE_GRAY, 6, rows);
}

void write_png_mask(const std::filesystem::path& path, const Mask& mask) {
  const int h = static_cast<int>(mask.rows());
  const int w = static_cast<int>(mask.cols());
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(w) * h);
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) raw[static_cast<std::size_t>(v) * w + u] = mask(v, u) ? 255 : 0;
  PngWriter wr(path);
  std::vector<png_bytep> rows(h);
  for (int v = 0; v < h; ++v) rows[v] = raw.data() + static_cast<std::size_t>(v) * w;
  wr.write(w, h, 8, PNG_COLOR_TYPE_GRAY, 1, rows);
}

std::pair<int, int> png_size(const std::filesystem::path& path) {
  PngReader r(path);
  return {r.width(), r.height()};
}

}  // namespace gesture
