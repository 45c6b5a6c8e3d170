#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Core>

namespace gesture {

/// Row-major per-pixel meters; 0 marks an invalid reading. Indexed (row = v, col = u).
using DepthMap = Eigen::Array<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Mask = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Interleaved 8-bit RGB.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

  std::uint8_t* at(int u, int v) { return data.data() + (static_cast<std::size_t>(v) * width + u) * 3; }
  const std::uint8_t* at(int u, int v) const {
    return data.data() + (static_cast<std::size_t>(v) * width + u) * 3;
  }

  bool operator==(const RgbImage&) const = default;
};

RgbImage read_png_rgb(const std::filesystem::path& path);
/// compression_level follows zlib (0..9); generation writes with level 1.
void write_png_rgb(const std::filesystem::path& path, const RgbImage& img, int compression_level = 1);

/// 16-bit single-channel PNG decoded to meters via depth_scale.
DepthMap read_png_depth(const std::filesystem::path& path, double depth_scale);
void write_png_depth(const std::filesystem::path& path, const DepthMap& depth, double depth_scale);

void write_png_mask(const std::filesystem::path& path, const Mask& mask);

/// Reads only the header; returns {width, height}.
std::pair<int, int> png_size(const std::filesystem::path& path);

}  // namespace gesture
