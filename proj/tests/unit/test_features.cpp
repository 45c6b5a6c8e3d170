#include <doctest.h>

#include "gesture/features.hpp"
#include "support.hpp"

using namespace gesture;
using doctest::Approx;

namespace {

KeypointFrame frame_at(int index, double u, double v, double d = 1.0) {
  KeypointFrame f;
  f.frame_index = index;
  for (int j = 0; j < 4; ++j) f.keypoints[j] = Eigen::Vector3d(u + 10.0 * j, v, d);
  return f;
}

// Moves 5 px/frame except inside the given inclusive ranges, where it stays put.
std::vector<KeypointFrame> with_holds(int n, std::vector<std::pair<int, int>> holds) {
  std::vector<KeypointFrame> out;
  double u = 50.0;
  for (int i = 0; i < n; ++i) {
    bool held = false;
    for (auto [a, b] : holds) held |= i >= a && i <= b;
    if (i > 0 && !held) u += 5.0;
    out.push_back(frame_at(i, u, 200.0));
  }
  return out;
}

}  // namespace

TEST_CASE("project_keypoints") {
  const Intrinsics K = testing::test_camera();
  HandPose id;
  id.tip = Point3(0, 0, 1);
  const KeypointFrame f = project_keypoints(id, HandDims{}, K, 7);
  CHECK(f.frame_index == 7);
  CHECK(f.keypoints[kTip].isApprox(Eigen::Vector3d(320, 240, 1.0)));
  CHECK(f.keypoints[kWrist].isApprox(Eigen::Vector3d(225, 240, 1.0)));
  CHECK(f.valid());

  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const Point3 d = Point3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.3, 1)).normalized();
    const HandPose p = make_pointing_pose(Point3(rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2), 1.0), d,
                                          Point3(0, -1, 0));
    const KeypointFrame kf = project_keypoints(p, HandDims{}, K);
    const HandKeypoints kp = hand_keypoints(p, HandDims{});
    for (int j = 0; j < 4; ++j) {
      CHECK((kf.keypoints[j].head<2>() - project(K, kp[j])).norm() == 0.0);
      CHECK(kf.keypoints[j].z() == kp[j].z());
    }
  }
}

TEST_CASE("select_keyframes") {
  const KeyframeConfig cfg;

  std::vector<KeypointFrame> same;
  for (int i = 0; i < 21; ++i) same.push_back(frame_at(i, 100, 100));
  CHECK(select_keyframes(same, cfg) == std::vector<int>{10});

  CHECK(select_keyframes(with_holds(30, {}), cfg).empty());

  CHECK(select_keyframes(with_holds(35, {{13, 18}, {29, 34}}), cfg) == std::vector<int>{15, 31});

  SUBCASE("runs shorter than min_run are ignored") {
    CHECK(select_keyframes(with_holds(20, {{5, 6}}), cfg).empty());
    CHECK(select_keyframes(with_holds(20, {{5, 7}}), cfg) == std::vector<int>{6});
  }
  SUBCASE("reports frame_index, not the vector position") {
    auto frames = with_holds(20, {{5, 10}});
    for (auto& f : frames) f.frame_index += 100;
    CHECK(select_keyframes(frames, cfg) == std::vector<int>{107});
  }
  CHECK(select_keyframes({}, cfg).empty());
}

TEST_CASE("keypoint_motion") {
  const auto frames = with_holds(4, {{2, 3}});
  const auto m = keypoint_motion(frames);
  REQUIRE(m.size() == 4);
  CHECK(std::isinf(m[0]));
  CHECK(m[1] == Approx(5.0));
  CHECK(m[2] == 0.0);
  CHECK(m[3] == 0.0);
}

TEST_CASE("encode_feature") {
  KeypointFrame kf;
  for (auto& k : kf.keypoints) k = Eigen::Vector3d(320, 240, 1.0);
  const GestureFeature h = encode_feature(kf, 640, 480);
  CHECK(h.size() == 12);
  for (int j = 0; j < 4; ++j) {
    CHECK(h(3 * j) == 0.5);
    CHECK(h(3 * j + 1) == 0.5);
    CHECK(h(3 * j + 2) == 1.0);
  }
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    KeypointFrame r;
    for (auto& k : r.keypoints) k = Eigen::Vector3d(rng.uniform(0, 640), rng.uniform(0, 480), rng.uniform(0.2, 3));
    const GestureFeature g = encode_feature(r, 640, 480);
    for (int j = 0; j < 4; ++j) {
      CHECK(g(3 * j) >= 0.0);
      CHECK(g(3 * j) < 1.0);
      CHECK(g(3 * j + 1) >= 0.0);
      CHECK(g(3 * j + 1) < 1.0);
    }
  }
  CHECK_THROWS_AS(encode_feature(kf, 0, 480), Error);
}

TEST_CASE("keyframe config validation") {
  KeyframeConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.min_run = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
