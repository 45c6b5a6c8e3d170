#include "gesture/grounding.hpp"

#include <algorithm>
#include <cmath>

#include "gesture/error.hpp"

namespace gesture {

std::string_view to_string(TargetRole role) { return role == TargetRole::Pick ? "pick" : "place"; }

TargetRole role_from_string(std::string_view s) {
  if (s == "pick") return TargetRole::Pick;
  if (s == "place") return TargetRole::Place;
  throw Error(ErrorCode::ParseError, "unknown target role '" + std::string(s) + "'");
}

void GroundingConfig::validate() const {
  if (!(jitter_frac >= 0 && jitter_frac < 1)) throw Error(ErrorCode::InvalidArgument, "jitter_frac must be in [0,1)");
  if (max_retries < 1) throw Error(ErrorCode::InvalidArgument, "max_retries must be >= 1");
  if (depth_half_window < 0) throw Error(ErrorCode::InvalidArgument, "depth_half_window must be >= 0");
  if (n_bins < 1) throw Error(ErrorCode::InvalidArgument, "n_bins must be >= 1");
}

Eigen::Vector2i jittered_center(const BBox& bbox, const GroundingConfig& cfg, Rng& rng) {
  const double cu = 0.5 * (bbox.x_min + bbox.x_max);
  const double cv = 0.5 * (bbox.y_min + bbox.y_max);
  const double ju = rng.uniform(-1.0, 1.0);
  const double jv = rng.uniform(-1.0, 1.0);

  double u = cu;
  double v = cv;
  if (cfg.enable_jitter) {
    u += ju * cfg.jitter_frac * 0.5 * (bbox.x_max - bbox.x_min);
    v += jv * cfg.jitter_frac * 0.5 * (bbox.y_max - bbox.y_min);
  }
  return {std::clamp(static_cast<int>(std::lround(u)), bbox.x_min, bbox.x_max),
          std::clamp(static_cast<int>(std::lround(v)), bbox.y_min, bbox.y_max)};
}

GroundedTarget ground_target(const SceneObservation& scene, int candidate_index, TargetRole role, int order,
                             const GroundingConfig& cfg, Rng& rng) {
  if (candidate_index < 0 || candidate_index >= static_cast<int>(scene.candidates.size()))
    throw Error(ErrorCode::InvalidArgument, "candidate index out of range");
  const ObjectCandidate& cand = scene.candidates[candidate_index];

  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    const Eigen::Vector2i px = jittered_center(cand.bbox, cfg, rng);
    double z;
    try {
      z = robust_depth_at(scene.depth, px.x(), px.y(), cfg.depth_half_window);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoValidDepth) continue;
      throw;
    }

    GroundedTarget t;
    t.role = role;
    t.order = order;
    t.candidate_index = candidate_index;
    t.label = cand.label;
    t.point_px = px;
    t.point_norm = {static_cast<double>(px.x()) / scene.width(), static_cast<double>(px.y()) / scene.height()};
    t.point_3d = backproject<double>(scene.intrinsics, px.x(), px.y(), z);
    t.loc_tokens = {discretize_coord(t.point_norm.x(), cfg.n_bins), discretize_coord(t.point_norm.y(), cfg.n_bins)};
    return t;
  }
  throw Error(ErrorCode::UngroundableTarget,
              "candidate " + std::to_string(candidate_index) + " has no valid depth after retries");
}

namespace {

std::vector<int> eligible(const SceneObservation& scene, const std::vector<std::string>& labels) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(scene.candidates.size()); ++i)
    if (std::find(labels.begin(), labels.end(), scene.candidates[i].label) != labels.end()) out.push_back(i);
  return out;
}

}  // namespace

TaskPlan sample_task_plan(const SceneObservation& scene, int task_type, int n_picks, const GroundingConfig& cfg,
                          Rng& rng) {
  if (n_picks < 1) throw Error(ErrorCode::InvalidArgument, "n_picks must be >= 1");
  std::vector<int> picks = eligible(scene, cfg.pick_labels);
  const std::vector<int> places = eligible(scene, cfg.place_labels);
  if (static_cast<int>(picks.size()) < n_picks || places.empty())
    throw Error(ErrorCode::InsufficientCandidates, scene.scene_id + ": need " + std::to_string(n_picks) +
                                                       " pick and 1 place candidates");

  // Partial Fisher-Yates: the first n_picks entries become the ordered picks.
  for (int i = 0; i < n_picks; ++i) {
    const auto j = i + static_cast<int>(rng.below(picks.size() - i));
    std::swap(picks[i], picks[j]);
  }
  const int place = places[rng.below(places.size())];

  TaskPlan plan;
  plan.task_type = task_type;
  for (int i = 0; i < n_picks; ++i)
    plan.targets.push_back(ground_target(scene, picks[i], TargetRole::Pick, i, cfg, rng));
  plan.targets.push_back(ground_target(scene, place, TargetRole::Place, n_picks, cfg, rng));
  return plan;
}

}  // namespace gesture
