#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "gesture/camera.hpp"
#include "gesture/grounding.hpp"
#include "gesture/random.hpp"

namespace gesture {

/// Index fingertip position plus the rotation taking the canonical hand frame
/// (+x along the extended index finger) into the camera frame.
struct HandPose {
  Point3 tip = Point3::Zero();
  Eigen::Matrix3d orientation = Eigen::Matrix3d::Identity();

  Point3 pointing() const { return orientation.col(0); }
  bool operator==(const HandPose&) const = default;
};

struct Hold {
  int target_order = 0;
  int start_frame = 0;
  int end_frame = 0;  // inclusive
  bool operator==(const Hold&) const = default;
};

struct GestureTrajectory {
  std::vector<HandPose> frames;
  std::vector<Hold> holds;
};

struct MotionConfig {
  double tau = 0.06;    ///< fingertip-to-target standoff (m)
  double delta = 0.02;  ///< approach step (m/frame)
  int approach_steps = 12;
  int hold_frames = 6;
  int transfer_frames = 10;
  double h_max = 0.08;  ///< peak transfer lift (m)
  Point3 n_up{0.0, -1.0, 0.0};
  double cone_half_angle = 1.0;
  int max_direction_retries = 100;
  /// Every moving frame must shift the keypoints by at least this many pixels
  /// on average, so hold frames are the only stagnant runs. 0 disables.
  double min_step_px = 3.0;

  void validate() const;
};

/// Keypoint offsets along the canonical finger axis, measured from the fingertip.
struct HandDims {
  double tip = 0.0;
  double pip = -0.05;
  double mcp = -0.09;
  double wrist = -0.19;

  bool valid() const;
};

enum Keypoint : int { kWrist = 0, kMcp = 1, kPip = 2, kTip = 3 };
using HandKeypoints = std::array<Point3, 4>;

/// Transfer lift profile h_max * (1 - (2a - 1)^2).
template <typename Scalar>
Scalar parabolic_lift(Scalar alpha, Scalar h_max) {
  const Scalar s = Scalar(2) * alpha - Scalar(1);
  return h_max * (Scalar(1) - s * s);
}

/// Spherical interpolation of unit vectors; endpoints are returned exactly.
Point3 slerp_direction(const Point3& from, const Point3& to, double alpha);

/// Unit direction drawn uniformly from the cone around the camera-to-target
/// ray, resampled until the whole approach stays in front of the camera with
/// the fingertip inside the image and moving at least min_step_px per frame.
Point3 sample_approach_direction(const Point3& target, const Intrinsics& K, const MotionConfig& cfg, Rng& rng,
                                 const HandDims& dims = {});

/// Fingertip positions target - d * (tau + k * delta) for k = K..0 (far to near).
std::vector<Point3> approach_segment(const Point3& target, const Point3& d, const MotionConfig& cfg);

HandPose make_pointing_pose(const Point3& tip, const Point3& d, const Point3& up_hint);

/// M poses from pose_from to (tip_to, d_to): linear base path with the
/// parabolic lift along n_up, pointing direction slerped.
std::vector<HandPose> transfer_segment(const HandPose& pose_from, const Point3& tip_to, const Point3& d_to,
                                       const MotionConfig& cfg);

std::vector<HandPose> hold_segment(const HandPose& pose, int count);

GestureTrajectory compose_trajectory(const TaskPlan& plan, const Intrinsics& K, const MotionConfig& cfg, Rng& rng,
                                     const HandDims& dims = {});

/// Keypoints in order [wrist, mcp, pip, tip].
HandKeypoints hand_keypoints(const HandPose& pose, const HandDims& dims = {});

}  // namespace gesture
