#include <doctest.h>

#include <fstream>

#include "gesture/camera.hpp"
#include "gesture/fixtures.hpp"
#include "gesture/random.hpp"
#include "gesture/ray.hpp"
#include "gesture/scene.hpp"
#include "gesture/tokens.hpp"
#include "support.hpp"

using namespace gesture;
using doctest::Approx;

TEST_CASE("backproject hand-evaluated points") {
  const Intrinsics K = testing::test_camera();
  CHECK(backproject(K, 320.0, 240.0, 1.0).isApprox(Point3(0, 0, 1)));
  const Point3 a = backproject(K, 820.0, 240.0, 2.0);
  CHECK(a.x() == Approx(2.0));
  CHECK(a.y() == Approx(0.0));
  CHECK(a.z() == Approx(2.0));
  const Point3 b = backproject(K, 320.0, 740.0, 0.5);
  CHECK(b.x() == Approx(0.0));
  CHECK(b.y() == Approx(0.5));
  CHECK(b.z() == Approx(0.5));
}

TEST_CASE("backproject rejects non-positive depth") {
  const Intrinsics K = testing::test_camera();
  CHECK_THROWS_AS(backproject(K, 1.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(backproject(K, 1.0, 1.0, -2.0), Error);
  try {
    backproject(K, 1.0, 1.0, 0.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveDepth);
  }
}

TEST_CASE("project hand-evaluated points and round trip") {
  const Intrinsics K = testing::test_camera();
  const Pixel p0 = project(K, Point3(0, 0, 1));
  CHECK(p0.x() == Approx(320));
  CHECK(p0.y() == Approx(240));
  const Pixel p1 = project(K, Point3(1, 1, 2));
  CHECK(p1.x() == Approx(570));
  CHECK(p1.y() == Approx(490));
  const Pixel rt = project(K, backproject(K, 411.5, 97.25, 1.37));
  CHECK(std::abs(rt.x() - 411.5) < 1e-9);
  CHECK(std::abs(rt.y() - 97.25) < 1e-9);
  CHECK_THROWS_AS(project(K, Point3(0, 0, 0)), Error);
}

TEST_CASE("camera templates work in float") {
  const CameraIntrinsics<float> Kf = testing::test_camera().cast<float>();
  const Vec3<float> p = backproject(Kf, 820.0f, 240.0f, 2.0f);
  CHECK(p.x() == Approx(2.0));
  const Vec2<float> px = project(Kf, p);
  CHECK(px.x() == Approx(820.0));
}

TEST_CASE("point_ray_distance") {
  const PointingRay ray{Point3::Zero(), Point3::UnitZ()};
  auto r = point_ray_distance(ray, Point3(0, 0, 2));
  CHECK(r.distance == Approx(0));
  CHECK(r.t == Approx(2));
  r = point_ray_distance(ray, Point3(1, 0, 3));
  CHECK(r.distance == Approx(1));
  CHECK(r.t == Approx(3));
  r = point_ray_distance(ray, Point3(3, 4, 0));
  CHECK(r.distance == Approx(5));
  CHECK(r.t == Approx(0));
}

TEST_CASE("robust_depth_at") {
  DepthMap d = DepthMap::Constant(20, 20, 1.0f);
  CHECK(robust_depth_at(d, 0, 0) == Approx(1.0));
  CHECK(robust_depth_at(d, 10, 7) == Approx(1.0));

  d.setConstant(2.0f);
  d(10, 10) = 0.0f;
  CHECK(robust_depth_at(d, 10, 10, 2) == Approx(2.0));

  SUBCASE("lower median of the valid window") {
    DepthMap e = DepthMap::Zero(5, 5);
    e(2, 2) = 1.0f;
    e(2, 3) = 3.0f;
    e(1, 2) = 2.0f;
    e(3, 3) = 5.0f;
    CHECK(robust_depth_at(e, 2, 2, 1) == Approx(2.0));
  }

  d.setZero();
  CHECK_THROWS_AS(robust_depth_at(d, 5, 5), Error);
  try {
    robust_depth_at(d, 5, 5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoValidDepth);
  }
}

TEST_CASE("bbox_point_cloud grid") {
  SceneObservation s = testing::flat_scene(1.0);
  CHECK(bbox_point_cloud(s, {0, 0, 10, 10}, 5).size() == 9);
  CHECK(bbox_point_cloud(s, {4, 4, 4, 4}, 3).size() == 1);
  for (int v = 20; v <= 30; ++v)
    for (int u = 20; u <= 30; ++u) s.depth(v, u) = 0.0f;
  CHECK(bbox_point_cloud(s, {20, 20, 30, 30}, 1).empty());

  const auto pts = bbox_point_cloud(s, {100, 50, 110, 60}, 2);
  for (const auto& p : pts) {
    const Pixel px = project(s.intrinsics, p);
    CHECK(std::abs(px.x() - std::round(px.x())) < 1e-9);
    CHECK(p.z() == Approx(1.0));
  }
}

TEST_CASE("tokenization") {
  CHECK(discretize_coord(0.0) == 0);
  CHECK(discretize_coord(1.0, 1024) == 1023);
  CHECK(discretize_coord(0.5, 1024) == 512);
  CHECK(undiscretize_coord(512, 1024) == 0.50048828125);
  CHECK(discretize_coord(-0.3, 16) == 0);
  CHECK(discretize_coord(7.0, 16) == 15);
  CHECK_THROWS_AS(discretize_coord(std::nan(""), 16), Error);
  CHECK_THROWS_AS(discretize_coord(0.5, 0), Error);

  Rng rng(11);
  double prev_x = -1.0;
  int prev_bin = 0;
  std::vector<double> xs(2000);
  for (auto& x : xs) x = rng.uniform();
  std::sort(xs.begin(), xs.end());
  for (double x : xs) {
    const int b = discretize_coord(x);
    CHECK(std::abs(undiscretize_coord(b) - x) <= 1.0 / (2 * 1024));
    if (prev_x >= 0) CHECK(b >= prev_bin);
    prev_x = x;
    prev_bin = b;
  }
}

TEST_CASE("rng and stable hash are deterministic") {
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  Rng c(5);
  Rng f1 = c.fork("motion");
  Rng f2 = Rng(5).fork("motion");
  CHECK(f1.uniform() == f2.uniform());
  CHECK(Rng(5).fork("motion").uniform() != Rng(5).fork("grounding").uniform());
  CHECK(StableHash().add("ab").add("c").digest() != StableHash().add("a").add("bc").digest());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(a.below(7) < 7u);
  }
}

TEST_CASE("scene save and load round trip") {
  testing::TempDir tmp("scene");
  fixtures::TabletopConfig cfg;
  cfg.width = 320;
  cfg.height = 240;
  cfg.focal = 262.5;
  const SceneObservation s = fixtures::make_tabletop_scene(4, "scene_x", cfg);
  save_scene(tmp / "scene_x", s);
  const SceneObservation r = load_scene(tmp / "scene_x");
  CHECK(r.scene_id == "scene_x");
  CHECK(r.rgb == s.rgb);
  CHECK((r.depth - s.depth).abs().maxCoeff() < 1e-6);
  CHECK(r.intrinsics.fx == s.intrinsics.fx);
  CHECK(r.intrinsics.width == 320);
  REQUIRE(r.candidates.size() == s.candidates.size());
  for (std::size_t i = 0; i < s.candidates.size(); ++i) {
    CHECK(r.candidates[i].label == s.candidates[i].label);
    CHECK(r.candidates[i].bbox == s.candidates[i].bbox);
  }
  const auto all = load_scenes(tmp.path());
  CHECK(all.size() == 1);
}

TEST_CASE("load_scene rejects malformed inputs") {
  testing::TempDir tmp("badscene");
  CHECK_THROWS_AS(load_scene(tmp / "missing"), Error);
  save_scene(tmp / "s", testing::flat_scene(1.0, 64, 48));
  std::ofstream(tmp / "s" / "objects.json") << "[{\"label\": \"block\", \"bbox\": [1, 2";
  CHECK_THROWS_AS(load_scene(tmp / "s"), Error);
}

TEST_CASE("fixture scenes satisfy their layout guarantees") {
  fixtures::TabletopConfig cfg;
  for (int i = 0; i < 3; ++i) {
    const SceneObservation s = fixtures::make_tabletop_scene(9, "fx" + std::to_string(i), cfg);
    CHECK_NOTHROW(s.validate());
    int blocks = 0;
    for (const auto& c : s.candidates) {
      blocks += c.label == "block";
      CHECK(c.bbox.x_min >= cfg.edge_margin_px);
      CHECK(c.bbox.y_max < cfg.height - cfg.edge_margin_px);
    }
    CHECK(blocks >= cfg.min_blocks);
  }
}
