#include <doctest.h>

#include <set>

#include "gesture/grounding.hpp"
#include "support.hpp"

using namespace gesture;
using doctest::Approx;

namespace {

SceneObservation boxes_scene(int n_blocks, int n_plates, double depth = 1.0) {
  SceneObservation s = testing::flat_scene(depth);
  int x = 20;
  for (int i = 0; i < n_plates; ++i, x += 110) s.candidates.push_back({"plate", {x, 300, x + 80, 380}, 0.9});
  x = 20;
  for (int i = 0; i < n_blocks; ++i, x += 110) s.candidates.push_back({"block", {x, 100, x + 60, 160}, 0.9});
  return s;
}

}  // namespace

TEST_CASE("jittered_center") {
  GroundingConfig cfg;
  Rng rng(1);
  cfg.enable_jitter = false;
  CHECK(jittered_center({0, 0, 100, 100}, cfg, rng) == Eigen::Vector2i(50, 50));

  cfg.enable_jitter = true;
  cfg.jitter_frac = 0.2;
  bool moved = false;
  for (int i = 0; i < 10000; ++i) {
    const Eigen::Vector2i p = jittered_center({0, 0, 100, 100}, cfg, rng);
    CHECK(p.x() >= 40);
    CHECK(p.x() <= 60);
    CHECK(p.y() >= 40);
    CHECK(p.y() <= 60);
    moved |= p != Eigen::Vector2i(50, 50);
  }
  CHECK(moved);
  CHECK(jittered_center({7, 9, 7, 9}, cfg, rng) == Eigen::Vector2i(7, 9));
}

TEST_CASE("jitter switch does not shift the random stream") {
  GroundingConfig on, off;
  off.enable_jitter = false;
  Rng a(3), b(3);
  jittered_center({0, 0, 50, 50}, on, a);
  jittered_center({0, 0, 50, 50}, off, b);
  CHECK(a.uniform() == b.uniform());
}

TEST_CASE("ground_target back-projects the chosen pixel") {
  GroundingConfig cfg;
  cfg.enable_jitter = false;
  Rng rng(2);

  SceneObservation s = testing::flat_scene(1.0);
  s.candidates.push_back({"block", {310, 230, 330, 250}, 1.0});
  GroundedTarget t = ground_target(s, 0, TargetRole::Pick, 0, cfg, rng);
  CHECK(t.point_px == Eigen::Vector2i(320, 240));
  CHECK(t.point_3d.isApprox(Point3(0, 0, 1)));
  CHECK(t.point_norm.x() == Approx(0.5));
  CHECK(t.loc_tokens[0] == 512);
  CHECK(t.loc_tokens[1] == 512);

  SceneObservation s2 = testing::flat_scene(2.0);
  s2.candidates.push_back({"block", {410, 230, 430, 250}, 1.0});
  t = ground_target(s2, 0, TargetRole::Place, 3, cfg, rng);
  CHECK(t.point_3d.x() == Approx(0.4));
  CHECK(t.point_3d.y() == Approx(0.0));
  CHECK(t.point_3d.z() == Approx(2.0));
  CHECK(t.role == TargetRole::Place);
  CHECK(t.order == 3);
}

TEST_CASE("ground_target over a depth hole is ungroundable") {
  GroundingConfig cfg;
  Rng rng(2);
  SceneObservation s = testing::flat_scene(1.0);
  s.candidates.push_back({"block", {100, 100, 140, 140}, 1.0});
  s.depth.block(90, 90, 60, 60).setZero();
  try {
    ground_target(s, 0, TargetRole::Pick, 0, cfg, rng);
    FAIL("expected UngroundableTarget");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UngroundableTarget);
  }
}

TEST_CASE("sample_task_plan") {
  GroundingConfig cfg;
  const SceneObservation s = boxes_scene(3, 2);

  SUBCASE("minimal task") {
    Rng rng(4);
    const TaskPlan p = sample_task_plan(s, 0, 1, cfg, rng);
    REQUIRE(p.targets.size() == 2);
    CHECK(p.targets[0].order == 0);
    CHECK(p.targets[0].role == TargetRole::Pick);
    CHECK(p.targets[0].label == "block");
    CHECK(p.targets[1].order == 1);
    CHECK(p.targets[1].role == TargetRole::Place);
    CHECK(p.targets[1].label == "plate");
  }
  SUBCASE("all picks distinct") {
    std::set<std::vector<int>> orders;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      Rng rng(seed);
      const TaskPlan p = sample_task_plan(s, 1, 3, cfg, rng);
      std::vector<int> picks;
      for (int i = 0; i < 3; ++i) picks.push_back(p.targets[i].candidate_index);
      CHECK(std::set<int>(picks.begin(), picks.end()) == std::set<int>{2, 3, 4});
      orders.insert(picks);
    }
    CHECK(orders.size() == 6);  // every permutation shows up
  }
  SUBCASE("pigeonhole") {
    Rng rng(4);
    try {
      sample_task_plan(s, 1, 5, cfg, rng);
      FAIL("expected InsufficientCandidates");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InsufficientCandidates);
    }
    Rng rng2(4);
    CHECK_THROWS_AS(sample_task_plan(boxes_scene(3, 0), 0, 1, cfg, rng2), Error);
  }
}

TEST_CASE("grounding config validation") {
  GroundingConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.jitter_frac = -0.1;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
