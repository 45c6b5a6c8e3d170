#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "gesture/motion.hpp"
#include "gesture/random.hpp"
#include "gesture/scene.hpp"

namespace gesture {

struct HandMesh {
  std::vector<Point3> vertices;  ///< canonical hand frame, fingertip at the origin
  std::vector<std::array<int, 3>> triangles;
  Eigen::Vector3d base_albedo{0.87, 0.67, 0.55};

  bool valid() const;
  Eigen::AlignedBox3d bounds() const;
};

struct AppearanceParams {
  Eigen::Vector3d albedo{0.87, 0.67, 0.55};
  double scale = 1.0;
  Point3 light_dir = Point3(0.2, 0.6, 1.0).normalized();  ///< direction the light travels
  double ambient = 0.35;

  bool operator==(const AppearanceParams&) const = default;
};

struct AppearanceConfig {
  bool enable = true;
  Eigen::Vector3d base_albedo{0.87, 0.67, 0.55};
  double albedo_jitter = 0.1;  ///< per-channel +-
  double scale_jitter = 0.1;   ///< scale in [1 - s, 1 + s]
  Point3 base_light_dir = Point3(0.2, 0.6, 1.0).normalized();
  double light_cone = 0.3;  ///< radians
  double ambient = 0.35;

  void validate() const;
};

struct RenderedFrame {
  RgbImage rgb;
  Mask hand_mask;
  DepthMap hand_depth;  ///< meters where hand_mask is set, 0 elsewhere
};

/// Procedural proxy: palm box, capsule fingers with the index finger extended
/// along +x to the origin, curled remaining fingers and a forearm stub.
HandMesh build_proxy_hand(const HandDims& dims = {});

/// Draws exactly the same number of values whether or not augmentation is on.
AppearanceParams augment_appearance(const AppearanceConfig& cfg, Rng& rng);

/// Z-buffered flat-shaded rasterization composited over the scene image. A
/// hand pixel is kept only where it is nearer than the scene depth (invalid
/// scene depth counts as infinitely far).
RenderedFrame render_frame(const SceneObservation& scene, const HandMesh& mesh, const HandPose& pose,
                           const AppearanceParams& app, const Intrinsics& K);

}  // namespace gesture
