#pragma once

#include <Eigen/Core>

#include "gesture/error.hpp"

namespace gesture {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

/// Camera-frame point in meters: +x right, +y down, +z forward.
using Point3 = Vec3<double>;
using Pixel = Vec2<double>;

/// Pinhole intrinsics. Pixel centers sit at integer coordinates.
template <typename Scalar>
struct CameraIntrinsics {
  Scalar fx{1};
  Scalar fy{1};
  Scalar cx{0};
  Scalar cy{0};
  int width{1};
  int height{1};
  /// Meters per stored depth unit (0.001 for millimeter PNGs).
  Scalar depth_scale{Scalar(0.001)};

  bool valid() const {
    return fx > 0 && fy > 0 && cx >= 0 && cx < width && cy >= 0 && cy < height && depth_scale > 0;
  }

  /// True when (u, v) lies within [0, width) x [0, height).
  bool contains(Scalar u, Scalar v) const {
    return u >= 0 && v >= 0 && u < Scalar(width) && v < Scalar(height);
  }

  template <typename Other>
  CameraIntrinsics<Other> cast() const {
    return {Other(fx), Other(fy), Other(cx), Other(cy), width, height, Other(depth_scale)};
  }
};

using Intrinsics = CameraIntrinsics<double>;

/// Lifts pixel (u, v) at depth z to the camera frame.
template <typename Scalar>
Vec3<Scalar> backproject(const CameraIntrinsics<Scalar>& K, Scalar u, Scalar v, Scalar z) {
  if (!(z > 0)) throw Error(ErrorCode::NonPositiveDepth, "backproject requires z > 0");
  return {(u - K.cx) * z / K.fx, (v - K.cy) * z / K.fy, z};
}

template <typename Scalar>
Vec2<Scalar> project(const CameraIntrinsics<Scalar>& K, const Vec3<Scalar>& p) {
  if (!(p.z() > 0)) throw Error(ErrorCode::NonPositiveDepth, "project requires z > 0");
  return {K.fx * p.x() / p.z() + K.cx, K.fy * p.y() / p.z() + K.cy};
}

}  // namespace gesture
