#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gesture/camera.hpp"
#include "gesture/image.hpp"

namespace gesture {

/// Inclusive integer pixel rectangle.
struct BBox {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;

  bool contains(int u, int v) const { return u >= x_min && u <= x_max && v >= y_min && v <= y_max; }
  bool within(int width, int height) const {
    return 0 <= x_min && x_min <= x_max && x_max < width && 0 <= y_min && y_min <= y_max && y_max < height;
  }
  bool operator==(const BBox&) const = default;
};

struct ObjectCandidate {
  std::string label;
  BBox bbox;
  double score = 1.0;
};

struct SceneObservation {
  std::string scene_id;
  RgbImage rgb;
  DepthMap depth;
  Intrinsics intrinsics;
  std::vector<ObjectCandidate> candidates;

  int width() const { return intrinsics.width; }
  int height() const { return intrinsics.height; }

  /// Throws InvalidArgument naming the first violated invariant.
  void validate() const;
};

/// Median (lower median for even counts) of the nonzero depths in the
/// (2*half_window+1)^2 neighborhood of (u, v), clipped to the image.
double robust_depth_at(const DepthMap& depth, int u, int v, int half_window = 2);

/// Back-projects every valid-depth pixel on the stride grid anchored at the
/// bbox's top-left corner. Invalid pixels are skipped, so the result may be empty.
std::vector<Point3> bbox_point_cloud(const SceneObservation& scene, const BBox& bbox, int stride);

/// Scene directory layout: rgb.png, depth.png (16-bit), camera.json, objects.json.
SceneObservation load_scene(const std::filesystem::path& dir);
void save_scene(const std::filesystem::path& dir, const SceneObservation& scene);

/// Loads every scene subdirectory, sorted by directory name.
std::vector<SceneObservation> load_scenes(const std::filesystem::path& scenes_dir);

}  // namespace gesture
