#include "gesture/features.hpp"

#include <cmath>
#include <limits>

#include "gesture/error.hpp"

namespace gesture {

bool KeypointFrame::valid() const {
  for (const auto& k : keypoints)
    if (!k.allFinite() || !(k.z() > 0)) return false;
  return true;
}

void KeyframeConfig::validate() const {
  if (!(eps_v > 0)) throw Error(ErrorCode::InvalidArgument, "eps_v must be > 0");
  if (min_run < 1) throw Error(ErrorCode::InvalidArgument, "min_run must be >= 1");
}

KeypointFrame project_keypoints(const HandPose& pose, const HandDims& dims, const Intrinsics& K, int frame_index) {
  const HandKeypoints pts = hand_keypoints(pose, dims);
  KeypointFrame kf;
  kf.frame_index = frame_index;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const Pixel px = project(K, pts[j]);
    kf.keypoints[j] = {px.x(), px.y(), pts[j].z()};
  }
  return kf;
}

std::vector<KeypointFrame> project_trajectory(const GestureTrajectory& traj, const HandDims& dims,
                                              const Intrinsics& K) {
  std::vector<KeypointFrame> out;
  out.reserve(traj.frames.size());
  for (std::size_t i = 0; i < traj.frames.size(); ++i)
    out.push_back(project_keypoints(traj.frames[i], dims, K, static_cast<int>(i)));
  return out;
}

std::vector<double> keypoint_motion(const std::vector<KeypointFrame>& frames) {
  std::vector<double> motion(frames.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 1; i < frames.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < 4; ++j)
      sum += (frames[i].keypoints[j].head<2>() - frames[i - 1].keypoints[j].head<2>()).norm();
    motion[i] = sum / 4.0;
  }
  return motion;
}

std::vector<int> select_keyframes(const std::vector<KeypointFrame>& frames, const KeyframeConfig& cfg) {
  const std::vector<double> motion = keypoint_motion(frames);
  std::vector<int> keyframes;
  std::size_t i = 0;
  while (i < frames.size()) {
    if (!(motion[i] < cfg.eps_v)) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end + 1 < frames.size() && motion[end + 1] < cfg.eps_v) ++end;
    if (static_cast<int>(end - i + 1) >= cfg.min_run) keyframes.push_back(frames[i + (end - i) / 2].frame_index);
    i = end + 1;
  }
  return keyframes;
}

GestureFeature encode_feature(const KeypointFrame& kf, int width, int height) {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::InvalidArgument, "image size must be positive");
  GestureFeature h;
  for (int j = 0; j < 4; ++j) {
    h(3 * j + 0) = kf.keypoints[j].x() / width;
    h(3 * j + 1) = kf.keypoints[j].y() / height;
    h(3 * j + 2) = kf.keypoints[j].z();
  }
  return h;
}

}  // namespace gesture
