#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "gesture/camera.hpp"
#include "gesture/motion.hpp"
#include "gesture/tokens.hpp"

namespace gesture {

/// Image-space keypoints (x px, y px, d m) in order [wrist, mcp, pip, tip].
struct KeypointFrame {
  int frame_index = 0;
  std::array<Eigen::Vector3d, 4> keypoints{};

  bool valid() const;
};

/// [wrist, mcp, pip, tip] x (x / width, y / height, d).
using GestureFeature = Eigen::Matrix<double, 12, 1>;

struct KeyframeConfig {
  double eps_v = 2.0;  ///< stagnation threshold, pixels per frame
  int min_run = 3;

  void validate() const;
};

/// d is each keypoint's camera z, not the scene depth behind it.
KeypointFrame project_keypoints(const HandPose& pose, const HandDims& dims, const Intrinsics& K, int frame_index = 0);

std::vector<KeypointFrame> project_trajectory(const GestureTrajectory& traj, const HandDims& dims,
                                              const Intrinsics& K);

/// Mean 2-D keypoint displacement of each frame from its predecessor; the
/// first frame is +inf.
std::vector<double> keypoint_motion(const std::vector<KeypointFrame>& frames);

/// One keyframe (the lower-median frame) per maximal run of at least min_run
/// consecutive frames moving less than eps_v.
std::vector<int> select_keyframes(const std::vector<KeypointFrame>& frames, const KeyframeConfig& cfg);

GestureFeature encode_feature(const KeypointFrame& kf, int width, int height);

}  // namespace gesture
