#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "gesture/scene.hpp"

namespace testing {

// Scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("gesture_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& p) const { return path_ / p; }

 private:
  std::filesystem::path path_;
};

inline gesture::Intrinsics test_camera(int w = 640, int h = 480) {
  return {500.0, 500.0, 320.0, 240.0, w, h, 0.001};
}

// Flat gray scene at constant depth with no candidates.
inline gesture::SceneObservation flat_scene(double depth, int w = 640, int h = 480) {
  gesture::SceneObservation s;
  s.scene_id = "flat";
  s.intrinsics = test_camera(w, h);
  s.rgb = gesture::RgbImage(w, h);
  std::fill(s.rgb.data.begin(), s.rgb.data.end(), std::uint8_t{90});
  s.depth = gesture::DepthMap::Constant(h, w, static_cast<float>(depth));
  return s;
}

}  // namespace testing
