#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gesture/error.hpp"
#include "gesture/features.hpp"
#include "gesture/ray.hpp"
#include "gesture/scene.hpp"

namespace gesture {

struct ResolveResult {
  int candidate_index = -1;
  double min_distance = 0.0;  ///< meters
  double ray_param = 0.0;     ///< t of the minimizing point, meters
};

struct OracleConfig {
  int stride = 4;
  double t_min = 0.0;
};

/// Ray from the MCP joint through the fingertip, both lifted to 3-D.
PointingRay pointing_ray(const KeypointFrame& kf, const Intrinsics& K);

/// Argmin over candidates of the closest forward (t >= t_min) cloud point.
/// Ties go to the smaller t, then the lower candidate index.
ResolveResult resolve_target(const SceneObservation& scene, const PointingRay& ray, int stride = 4,
                             double t_min = 0.0);

/// One entry per keyframe; a keyframe that fails to resolve leaves the error
/// code in place of a result.
struct SequenceEntry {
  std::optional<ResolveResult> result;
  std::optional<ErrorCode> error;
};

std::vector<SequenceEntry> resolve_sequence(const std::vector<KeypointFrame>& keyframes,
                                            const SceneObservation& scene, const OracleConfig& cfg);

struct TargetOutcome {
  int expected = -1;
  std::optional<int> predicted;
  std::optional<double> distance;
};

struct SampleOutcome {
  std::string sample_id;
  std::vector<TargetOutcome> per_target;

  bool all_correct() const;
  double fraction_correct() const;
};

struct EvalReport {
  int n_samples = 0;
  double accuracy = 0.0;        ///< percent of samples with every target correct
  double progress_score = 0.0;  ///< percent, mean per-sample fraction correct
  std::vector<SampleOutcome> per_sample;
};

/// Per-sample predictions aligned with supervision; missing or unresolved
/// predictions count as incorrect.
struct SamplePrediction {
  std::string sample_id;
  std::vector<std::optional<int>> predicted;
  std::vector<std::optional<double>> distance;
};

struct SampleSupervision {
  std::string sample_id;
  std::vector<int> expected;
};

EvalReport evaluate(const std::vector<SamplePrediction>& predictions,
                    const std::vector<SampleSupervision>& supervision);

}  // namespace gesture
