#include <doctest.h>

#include "gesture/render.hpp"
#include "support.hpp"

using namespace gesture;
using doctest::Approx;

namespace {

HandPose pose_at(const Point3& tip, const Point3& d) { return make_pointing_pose(tip, d.normalized(), Point3(0, -1, 0)); }

}  // namespace

TEST_CASE("proxy hand mesh") {
  const HandDims dims;
  const HandMesh mesh = build_proxy_hand(dims);
  CHECK(mesh.valid());
  CHECK(!mesh.triangles.empty());
  for (const auto& tri : mesh.triangles)
    for (int i : tri) {
      CHECK(i >= 0);
      CHECK(i < static_cast<int>(mesh.vertices.size()));
    }
  const Eigen::AlignedBox3d box = mesh.bounds();
  CHECK(box.sizes().x() >= 0.19);

  Eigen::AlignedBox3d inflated = box;
  inflated.extend(box.min() - Eigen::Vector3d::Constant(0.01));
  inflated.extend(box.max() + Eigen::Vector3d::Constant(0.01));
  for (const Point3& k : hand_keypoints(HandPose{}, dims)) CHECK(inflated.contains(k));
  // The fingertip is the most distal point.
  CHECK(box.max().x() == Approx(0.0).epsilon(1e-9));
}

TEST_CASE("augment_appearance") {
  AppearanceConfig cfg;
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const AppearanceParams p = augment_appearance(cfg, rng);
    CHECK(p.scale >= 0.9);
    CHECK(p.scale <= 1.1);
    CHECK(p.light_dir.norm() == Approx(1.0));
    for (int c = 0; c < 3; ++c) CHECK(std::abs(p.albedo[c] - cfg.base_albedo[c]) <= cfg.albedo_jitter + 1e-12);
  }
  Rng a(4), b(4);
  CHECK(augment_appearance(cfg, a) == augment_appearance(cfg, b));

  cfg.enable = false;
  Rng c(5);
  const AppearanceParams off = augment_appearance(cfg, c);
  CHECK(off.scale == 1.0);
  CHECK(off.albedo == cfg.base_albedo);
  CHECK(off.light_dir == cfg.base_light_dir);

  // Disabling augmentation consumes the same number of draws.
  AppearanceConfig on;
  Rng d(6), e(6);
  augment_appearance(on, d);
  augment_appearance(cfg, e);
  CHECK(d.uniform() == e.uniform());
}

TEST_CASE("render_frame occlusion and empty mesh") {
  const HandMesh mesh = build_proxy_hand();
  const AppearanceParams app;

  SUBCASE("scene in front of the hand hides it") {
    const SceneObservation s = testing::flat_scene(0.5);
    const RenderedFrame f = render_frame(s, mesh, pose_at(Point3(0, 0, 1.0), Point3(0.3, 0.1, 1)), app, s.intrinsics);
    CHECK(f.rgb == s.rgb);
    CHECK(f.hand_mask.count() == 0);
  }
  SUBCASE("empty mesh draws nothing") {
    const SceneObservation s = testing::flat_scene(1.5);
    const RenderedFrame f = render_frame(s, HandMesh{}, pose_at(Point3(0, 0, 0.6), Point3(0.3, 0.1, 1)), app,
                                         s.intrinsics);
    CHECK(f.rgb == s.rgb);
    CHECK(f.hand_mask.count() == 0);
  }
  SUBCASE("hand behind the camera draws nothing") {
    const SceneObservation s = testing::flat_scene(1.5);
    const RenderedFrame f = render_frame(s, mesh, pose_at(Point3(0, 0, -0.5), Point3(0.3, 0.1, 1)), app,
                                         s.intrinsics);
    CHECK(f.hand_mask.count() == 0);
  }
}

TEST_CASE("rendered fingertip matches its projection") {
  const HandMesh mesh = build_proxy_hand();
  const AppearanceParams app;
  const SceneObservation s = testing::flat_scene(1.5);
  // Finger pointing to the right and slightly into the scene.
  const HandPose pose = pose_at(Point3(0.02, 0.01, 0.6), Point3(1, 0, 0.3));
  const RenderedFrame f = render_frame(s, mesh, pose, app, s.intrinsics);
  REQUIRE(f.hand_mask.count() > 0);
  CHECK(f.rgb != s.rgb);

  int extreme_u = -1, extreme_v = -1;
  for (int v = 0; v < s.height(); ++v)
    for (int u = 0; u < s.width(); ++u)
      if (f.hand_mask(v, u) && u > extreme_u) extreme_u = u, extreme_v = v;
  const Pixel tip = project(s.intrinsics, pose.tip);
  CHECK(std::abs(extreme_u - tip.x()) <= 2.0);
  CHECK(std::abs(extreme_v - tip.y()) <= 8.0);  // finger radius

  // Hand depth is populated exactly under the mask and sits in front of the scene.
  for (int v = 0; v < s.height(); ++v)
    for (int u = 0; u < s.width(); ++u) {
      if (f.hand_mask(v, u)) {
        CHECK(f.hand_depth(v, u) > 0.3f);
        CHECK(f.hand_depth(v, u) < 1.5f);
      } else {
        CHECK(f.hand_depth(v, u) == 0.0f);
      }
    }
}

TEST_CASE("rendering is deterministic and respects scale") {
  const HandMesh mesh = build_proxy_hand();
  const SceneObservation s = testing::flat_scene(1.5);
  const HandPose pose = pose_at(Point3(0.0, 0.05, 0.6), Point3(0.5, 0.2, 1));
  AppearanceParams small, big;
  small.scale = 0.9;
  big.scale = 1.1;
  const RenderedFrame a = render_frame(s, mesh, pose, small, s.intrinsics);
  const RenderedFrame b = render_frame(s, mesh, pose, small, s.intrinsics);
  CHECK(a.rgb == b.rgb);
  const RenderedFrame c = render_frame(s, mesh, pose, big, s.intrinsics);
  CHECK(c.hand_mask.count() > a.hand_mask.count());
}
