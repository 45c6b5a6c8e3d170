#include "gesture/oracle.hpp"

#include <limits>

namespace gesture {

PointingRay pointing_ray(const KeypointFrame& kf, const Intrinsics& K) {
  const Eigen::Vector3d& mcp = kf.keypoints[1];
  const Eigen::Vector3d& tip = kf.keypoints[3];
  const Point3 origin = backproject(K, mcp.x(), mcp.y(), mcp.z());
  const Point3 end = backproject(K, tip.x(), tip.y(), tip.z());
  const Point3 span = end - origin;
  if (span.norm() < 1e-6) throw Error(ErrorCode::DegenerateRay, "mcp and fingertip coincide");
  return {origin, span.normalized()};
}

ResolveResult resolve_target(const SceneObservation& scene, const PointingRay& ray, int stride, double t_min) {
  if (scene.candidates.empty()) throw Error(ErrorCode::InvalidArgument, "scene has no candidates");
  if (stride < 1) throw Error(ErrorCode::InvalidArgument, "stride must be >= 1");

  ResolveResult best;
  best.min_distance = std::numeric_limits<double>::infinity();
  best.ray_param = std::numeric_limits<double>::infinity();

  const Intrinsics& K = scene.intrinsics;
  for (int ci = 0; ci < static_cast<int>(scene.candidates.size()); ++ci) {
    const BBox& box = scene.candidates[ci].bbox;
    double cand_d = std::numeric_limits<double>::infinity();
    double cand_t = 0.0;
    // Same grid as bbox_point_cloud, without materializing the cloud.
    for (int v = box.y_min; v <= box.y_max; v += stride) {
      for (int u = box.x_min; u <= box.x_max; u += stride) {
        const double z = scene.depth(v, u);
        if (!(z > 0)) continue;
        const RayDistance<double> rd = point_ray_distance(ray, backproject<double>(K, u, v, z));
        if (rd.t < t_min) continue;
        if (rd.distance < cand_d || (rd.distance == cand_d && rd.t < cand_t)) {
          cand_d = rd.distance;
          cand_t = rd.t;
        }
      }
    }
    if (cand_d == std::numeric_limits<double>::infinity()) continue;
    if (cand_d < best.min_distance || (cand_d == best.min_distance && cand_t < best.ray_param)) {
      best = {ci, cand_d, cand_t};
    }
  }
  if (best.candidate_index < 0) throw Error(ErrorCode::NoResolvableCandidate, "no candidate lies ahead of the ray");
  return best;
}

std::vector<SequenceEntry> resolve_sequence(const std::vector<KeypointFrame>& keyframes,
                                            const SceneObservation& scene, const OracleConfig& cfg) {
  if (keyframes.empty()) throw Error(ErrorCode::InvalidArgument, "resolve_sequence needs at least one keyframe");
  std::vector<SequenceEntry> out;
  out.reserve(keyframes.size());
  for (const KeypointFrame& kf : keyframes) {
    SequenceEntry entry;
    try {
      entry.result = resolve_target(scene, pointing_ray(kf, scene.intrinsics), cfg.stride, cfg.t_min);
    } catch (const Error& e) {
      entry.error = e.code();
    }
    out.push_back(entry);
  }
  return out;
}

bool SampleOutcome::all_correct() const {
  for (const auto& t : per_target)
    if (!t.predicted || *t.predicted != t.expected) return false;
  return !per_target.empty();
}

double SampleOutcome::fraction_correct() const {
  if (per_target.empty()) return 0.0;
  int ok = 0;
  for (const auto& t : per_target)
    if (t.predicted && *t.predicted == t.expected) ++ok;
  return static_cast<double>(ok) / per_target.size();
}

EvalReport evaluate(const std::vector<SamplePrediction>& predictions,
                    const std::vector<SampleSupervision>& supervision) {
  if (supervision.empty()) throw Error(ErrorCode::EmptyDataset, "nothing to evaluate");
  if (predictions.size() != supervision.size())
    throw Error(ErrorCode::InvalidArgument, "prediction count " + std::to_string(predictions.size()) +
                                                " does not match supervision count " +
                                                std::to_string(supervision.size()));
  EvalReport report;
  report.n_samples = static_cast<int>(supervision.size());
  int all_ok = 0;
  double progress = 0.0;
  for (std::size_t i = 0; i < supervision.size(); ++i) {
    const SampleSupervision& sup = supervision[i];
    const SamplePrediction& pred = predictions[i];
    if (pred.sample_id != sup.sample_id)
      throw Error(ErrorCode::InvalidArgument, "sample id mismatch: expected '" + sup.sample_id + "', got '" +
                                                  pred.sample_id + "'");
    SampleOutcome outcome;
    outcome.sample_id = sup.sample_id;
    for (std::size_t k = 0; k < sup.expected.size(); ++k) {
      TargetOutcome t;
      t.expected = sup.expected[k];
      if (k < pred.predicted.size()) t.predicted = pred.predicted[k];
      if (k < pred.distance.size()) t.distance = pred.distance[k];
      outcome.per_target.push_back(t);
    }
    if (outcome.all_correct()) ++all_ok;
    progress += outcome.fraction_correct();
    report.per_sample.push_back(std::move(outcome));
  }
  report.accuracy = 100.0 * all_ok / report.n_samples;
  report.progress_score = 100.0 * progress / report.n_samples;
  return report;
}

}  // namespace gesture
