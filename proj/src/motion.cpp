#include "gesture/motion.hpp"

#include <cmath>

#include <Eigen/Geometry>

#include "gesture/error.hpp"

namespace gesture {
namespace {

constexpr double kNearZ = 0.01;
constexpr double kParallelTol = 1e-6;

Point3 any_perpendicular(const Point3& a) {
  const Point3 helper = std::abs(a.x()) < 0.9 ? Point3::UnitX() : Point3::UnitY();
  return a.cross(helper).normalized();
}

Point3 sample_in_cone(const Point3& axis, double half_angle, Rng& rng) {
  const double cos_max = std::cos(half_angle);
  const double cos_theta = 1.0 - rng.uniform() * (1.0 - cos_max);
  const double phi = 2.0 * M_PI * rng.uniform();
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  const Point3 b1 = any_perpendicular(axis);
  const Point3 b2 = axis.cross(b1);
  Point3 d = cos_theta * axis + sin_theta * (std::cos(phi) * b1 + std::sin(phi) * b2);
  if (sin_theta != 0.0) d.normalize();
  return d;
}

HandKeypoints keypoints_along(const Point3& tip, const Point3& d, const HandDims& dims) {
  return {tip + dims.wrist * d, tip + dims.mcp * d, tip + dims.pip * d, tip + dims.tip * d};
}

bool in_front(const HandKeypoints& kp) {
  for (const auto& p : kp)
    if (!(p.z() > kNearZ)) return false;
  return true;
}

double mean_pixel_motion(const HandKeypoints& a, const HandKeypoints& b, const Intrinsics& K) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) sum += (project(K, a[j]) - project(K, b[j])).norm();
  return sum / static_cast<double>(a.size());
}

bool tip_visible(const Point3& tip, const Intrinsics& K) {
  if (!(tip.z() > kNearZ)) return false;
  const Pixel px = project(K, tip);
  return K.contains(px.x(), px.y());
}

bool approach_feasible(const Point3& target, const Point3& d, const Intrinsics& K, const MotionConfig& cfg,
                       const HandDims& dims) {
  if (std::abs(d.dot(cfg.n_up)) > 1.0 - kParallelTol) return false;
  const std::vector<Point3> tips = approach_segment(target, d, cfg);
  HandKeypoints prev;
  for (std::size_t i = 0; i < tips.size(); ++i) {
    if (!tip_visible(tips[i], K)) return false;
    const HandKeypoints kp = keypoints_along(tips[i], d, dims);
    if (!in_front(kp)) return false;
    if (i > 0 && mean_pixel_motion(prev, kp, K) < cfg.min_step_px) return false;
    prev = kp;
  }
  return true;
}

bool transfer_feasible(const std::vector<HandPose>& poses, const Intrinsics& K, const MotionConfig& cfg,
                       const HandDims& dims) {
  if (!tip_visible(poses.back().tip, K)) return false;
  HandKeypoints prev;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const HandKeypoints kp = hand_keypoints(poses[i], dims);
    if (!in_front(kp)) return false;
    if (i > 0 && mean_pixel_motion(prev, kp, K) < cfg.min_step_px) return false;
    prev = kp;
  }
  return true;
}

}  // namespace

void MotionConfig::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (!(tau > 0)) fail("tau must be > 0");
  if (!(delta > 0)) fail("delta must be > 0");
  if (approach_steps < 0) fail("approach_steps must be >= 0");
  if (hold_frames < 1) fail("hold_frames must be >= 1");
  if (transfer_frames < 2) fail("transfer_frames must be >= 2");
  if (!(h_max >= 0)) fail("h_max must be >= 0");
  if (std::abs(n_up.norm() - 1.0) > 1e-9) fail("n_up must be a unit vector");
  if (!(cone_half_angle >= 0 && cone_half_angle <= M_PI)) fail("cone_half_angle must be in [0, pi]");
  if (max_direction_retries < 1) fail("max_direction_retries must be >= 1");
  if (!(min_step_px >= 0)) fail("min_step_px must be >= 0");
}

bool HandDims::valid() const {
  return std::isfinite(wrist) && std::isfinite(tip) && tip > pip && pip > mcp && mcp > wrist;
}

Point3 slerp_direction(const Point3& from, const Point3& to, double alpha) {
  if (alpha <= 0.0) return from;
  if (alpha >= 1.0) return to;
  const double c = std::clamp(from.dot(to), -1.0, 1.0);
  if (c > 1.0 - 1e-12) return ((1.0 - alpha) * from + alpha * to).normalized();
  if (c < -1.0 + 1e-12) return Eigen::AngleAxisd(alpha * M_PI, any_perpendicular(from)) * from;
  const double omega = std::acos(c);
  const double s = std::sin(omega);
  return ((std::sin((1.0 - alpha) * omega) / s) * from + (std::sin(alpha * omega) / s) * to).normalized();
}

Point3 sample_approach_direction(const Point3& target, const Intrinsics& K, const MotionConfig& cfg, Rng& rng,
                                 const HandDims& dims) {
  if (!(target.z() > 0)) throw Error(ErrorCode::NonPositiveDepth, "approach target must have z > 0");
  const Point3 axis = target.normalized();
  for (int attempt = 0; attempt < cfg.max_direction_retries; ++attempt) {
    const Point3 d = sample_in_cone(axis, cfg.cone_half_angle, rng);
    if (approach_feasible(target, d, K, cfg, dims)) return d;
  }
  throw Error(ErrorCode::NoFeasibleDirection, "no approach direction keeps the hand in view");
}

std::vector<Point3> approach_segment(const Point3& target, const Point3& d, const MotionConfig& cfg) {
  std::vector<Point3> tips;
  tips.reserve(cfg.approach_steps + 1);
  for (int k = cfg.approach_steps; k >= 0; --k) tips.push_back(target - d * (cfg.tau + k * cfg.delta));
  return tips;
}

HandPose make_pointing_pose(const Point3& tip, const Point3& d, const Point3& up_hint) {
  const Point3 down = -up_hint;
  const Point3 y_raw = down - down.dot(d) * d;
  if (y_raw.norm() < kParallelTol) throw Error(ErrorCode::DegenerateUp, "pointing direction parallel to up hint");
  HandPose pose;
  pose.tip = tip;
  pose.orientation.col(0) = d;
  pose.orientation.col(1) = y_raw.normalized();
  pose.orientation.col(2) = d.cross(pose.orientation.col(1));
  return pose;
}

std::vector<HandPose> transfer_segment(const HandPose& pose_from, const Point3& tip_to, const Point3& d_to,
                                       const MotionConfig& cfg) {
  const int m = cfg.transfer_frames;
  if (m < 2) throw Error(ErrorCode::InvalidArgument, "transfer needs at least 2 frames");
  const Point3 d_from = pose_from.pointing();
  std::vector<HandPose> out;
  out.reserve(m);
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      out.push_back(pose_from);
      continue;
    }
    const double alpha = static_cast<double>(i) / (m - 1);
    const Point3 base = i == m - 1 ? tip_to : Point3((1.0 - alpha) * pose_from.tip + alpha * tip_to);
    const Point3 vis = base + parabolic_lift(alpha, cfg.h_max) * cfg.n_up;
    out.push_back(make_pointing_pose(vis, slerp_direction(d_from, d_to, alpha), cfg.n_up));
  }
  return out;
}

std::vector<HandPose> hold_segment(const HandPose& pose, int count) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "hold needs at least 1 frame");
  return std::vector<HandPose>(static_cast<std::size_t>(count), pose);
}

GestureTrajectory compose_trajectory(const TaskPlan& plan, const Intrinsics& K, const MotionConfig& cfg, Rng& rng,
                                     const HandDims& dims) {
  if (plan.targets.empty()) throw Error(ErrorCode::InvalidArgument, "cannot compose a trajectory for an empty plan");
  GestureTrajectory traj;
  auto append_hold = [&](const HandPose& pose, int order) {
    const int start = static_cast<int>(traj.frames.size());
    for (const HandPose& p : hold_segment(pose, cfg.hold_frames)) traj.frames.push_back(p);
    traj.holds.push_back({order, start, static_cast<int>(traj.frames.size()) - 1});
  };

  const GroundedTarget& first = plan.targets.front();
  const Point3 d0 = sample_approach_direction(first.point_3d, K, cfg, rng, dims);
  for (const Point3& tip : approach_segment(first.point_3d, d0, cfg))
    traj.frames.push_back(make_pointing_pose(tip, d0, cfg.n_up));
  append_hold(traj.frames.back(), first.order);

  for (std::size_t j = 1; j < plan.targets.size(); ++j) {
    const GroundedTarget& target = plan.targets[j];
    const HandPose from = traj.frames.back();
    const Point3 axis = target.point_3d.normalized();
    std::vector<HandPose> transfer;
    bool found = false;
    for (int attempt = 0; attempt < cfg.max_direction_retries && !found; ++attempt) {
      const Point3 d = sample_in_cone(axis, cfg.cone_half_angle, rng);
      if (std::abs(d.dot(cfg.n_up)) > 1.0 - kParallelTol) continue;
      transfer = transfer_segment(from, target.point_3d - cfg.tau * d, d, cfg);
      found = transfer_feasible(transfer, K, cfg, dims);
    }
    if (!found) throw Error(ErrorCode::NoFeasibleDirection, "no transfer direction keeps the hand in view");
    traj.frames.insert(traj.frames.end(), transfer.begin(), transfer.end());
    append_hold(traj.frames.back(), target.order);
  }
  return traj;
}

HandKeypoints hand_keypoints(const HandPose& pose, const HandDims& dims) {
  const Point3 axis = pose.orientation.col(0);
  return {pose.tip + dims.wrist * axis, pose.tip + dims.mcp * axis, pose.tip + dims.pip * axis,
          pose.tip + dims.tip * axis};
}

}  // namespace gesture
