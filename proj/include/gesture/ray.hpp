#pragma once

#include <cmath>

#include "gesture/camera.hpp"

namespace gesture {

template <typename Scalar>
struct Ray {
  Vec3<Scalar> origin = Vec3<Scalar>::Zero();
  Vec3<Scalar> dir = Vec3<Scalar>::UnitZ();
};

using PointingRay = Ray<double>;

template <typename Scalar>
struct RayDistance {
  Scalar distance;
  /// Signed parameter of the closest point along the ray direction.
  Scalar t;
};

/// Perpendicular distance from p to the ray's supporting line, and the
/// parameter of the foot point. Callers apply any forward (t >= t_min) filter.
template <typename Scalar>
RayDistance<Scalar> point_ray_distance(const Ray<Scalar>& ray, const Vec3<Scalar>& p) {
  const Vec3<Scalar> rel = p - ray.origin;
  const Scalar t = rel.dot(ray.dir);
  return {(rel - t * ray.dir).norm(), t};
}

}  // namespace gesture
