#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "gesture/random.hpp"
#include "gesture/scene.hpp"
#include "gesture/tokens.hpp"

namespace gesture {

enum class TargetRole { Pick, Place };

std::string_view to_string(TargetRole role);
TargetRole role_from_string(std::string_view s);

/// One supervision anchor: where the hand points and what it points at.
struct GroundedTarget {
  TargetRole role = TargetRole::Pick;
  int order = 0;
  int candidate_index = 0;
  std::string label;
  Eigen::Vector2i point_px = Eigen::Vector2i::Zero();
  Eigen::Vector2d point_norm = Eigen::Vector2d::Zero();
  Point3 point_3d = Point3::Zero();
  std::array<int, 2> loc_tokens{0, 0};
};

struct TaskPlan {
  int task_type = 0;
  std::vector<GroundedTarget> targets;
};

struct GroundingConfig {
  /// Jitter amplitude as a fraction of the bbox half-extent, per axis.
  double jitter_frac = 0.2;
  bool enable_jitter = true;
  int max_retries = 50;
  int depth_half_window = 2;
  int n_bins = kDefaultBins;
  std::vector<std::string> pick_labels{"block"};
  std::vector<std::string> place_labels{"plate"};

  void validate() const;
};

/// Bbox center plus a uniform per-axis offset, rounded and clamped into the box.
/// Two draws are consumed even with jitter disabled so downstream streams do
/// not shift when the knob is toggled.
Eigen::Vector2i jittered_center(const BBox& bbox, const GroundingConfig& cfg, Rng& rng);

GroundedTarget ground_target(const SceneObservation& scene, int candidate_index, TargetRole role, int order,
                             const GroundingConfig& cfg, Rng& rng);

/// n_picks distinct pick-eligible candidates (uniform, without replacement)
/// followed by one place-eligible candidate, grounded in that pointing order.
TaskPlan sample_task_plan(const SceneObservation& scene, int task_type, int n_picks, const GroundingConfig& cfg,
                          Rng& rng);

}  // namespace gesture
