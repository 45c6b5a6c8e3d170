#include "gesture/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Geometry>

#include "gesture/error.hpp"

namespace gesture {
namespace {

constexpr double kNearZ = 0.01;

class MeshBuilder {
 public:
  explicit MeshBuilder(HandMesh& mesh) : mesh_(mesh) {}

  void box(const Point3& lo, const Point3& hi) {
    const int base = static_cast<int>(mesh_.vertices.size());
    for (int i = 0; i < 8; ++i)
      mesh_.vertices.emplace_back(i & 1 ? hi.x() : lo.x(), i & 2 ? hi.y() : lo.y(), i & 4 ? hi.z() : lo.z());
    static constexpr int kFaces[6][4] = {{0, 1, 3, 2}, {4, 6, 7, 5}, {0, 4, 5, 1},
                                         {2, 3, 7, 6}, {0, 2, 6, 4}, {1, 5, 7, 3}};
    for (const auto& f : kFaces) quad(base + f[0], base + f[1], base + f[2], base + f[3]);
  }

  /// Sphere-swept segment a-b: two hemispherical caps joined by a cylinder.
  void capsule(const Point3& a, const Point3& b, double radius, int slices = 10, int cap_rings = 3) {
    const Point3 w = (b - a).normalized();
    const Point3 helper = std::abs(w.x()) < 0.9 ? Point3::UnitX() : Point3::UnitY();
    const Point3 u = w.cross(helper).normalized();
    const Point3 v = w.cross(u);

    const int pole_a = add(a - radius * w);
    std::vector<int> prev_ring;
    auto ring = [&](const Point3& center, double theta) {
      std::vector<int> idx;
      for (int s = 0; s < slices; ++s) {
        const double phi = 2.0 * M_PI * s / slices;
        const Point3 radial = std::cos(phi) * u + std::sin(phi) * v;
        idx.push_back(add(center + radius * (std::cos(theta) * radial + std::sin(theta) * w)));
      }
      return idx;
    };
    auto connect = [&](const std::vector<int>& r0, const std::vector<int>& r1) {
      for (int s = 0; s < slices; ++s) quad(r0[s], r0[(s + 1) % slices], r1[(s + 1) % slices], r1[s]);
    };

    for (int i = 1; i <= cap_rings; ++i) {
      const double theta = -M_PI_2 + M_PI_2 * i / cap_rings;
      std::vector<int> r = ring(a, theta);
      if (prev_ring.empty()) {
        for (int s = 0; s < slices; ++s) tri(pole_a, r[(s + 1) % slices], r[s]);
      } else {
        connect(prev_ring, r);
      }
      prev_ring = std::move(r);
    }
    for (int i = 0; i < cap_rings; ++i) {
      const double theta = M_PI_2 * i / cap_rings;
      std::vector<int> r = ring(b, theta);
      connect(prev_ring, r);
      prev_ring = std::move(r);
    }
    const int pole_b = add(b + radius * w);
    for (int s = 0; s < slices; ++s) tri(prev_ring[s], prev_ring[(s + 1) % slices], pole_b);
  }

 private:
  int add(const Point3& p) {
    mesh_.vertices.push_back(p);
    return static_cast<int>(mesh_.vertices.size()) - 1;
  }
  void tri(int a, int b, int c) { mesh_.triangles.push_back({a, b, c}); }
  void quad(int a, int b, int c, int d) {
    tri(a, b, c);
    tri(a, c, d);
  }

  HandMesh& mesh_;
};

Point3 perturb_in_cone(const Point3& axis, double half_angle, double u1, double u2) {
  const double cos_theta = 1.0 - u1 * (1.0 - std::cos(half_angle));
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  const double phi = 2.0 * M_PI * u2;
  const Point3 helper = std::abs(axis.x()) < 0.9 ? Point3::UnitX() : Point3::UnitY();
  const Point3 b1 = axis.cross(helper).normalized();
  const Point3 b2 = axis.cross(b1);
  return (cos_theta * axis + sin_theta * (std::cos(phi) * b1 + std::sin(phi) * b2)).normalized();
}

}  // namespace

bool HandMesh::valid() const {
  if (vertices.empty()) return false;
  const int n = static_cast<int>(vertices.size());
  for (const auto& t : triangles)
    for (int i : t)
      if (i < 0 || i >= n) return false;
  return true;
}

Eigen::AlignedBox3d HandMesh::bounds() const {
  Eigen::AlignedBox3d box;
  for (const auto& v : vertices) box.extend(v);
  return box;
}

void AppearanceConfig::validate() const {
  if (!(albedo_jitter >= 0 && scale_jitter >= 0 && scale_jitter < 1 && light_cone >= 0))
    throw Error(ErrorCode::InvalidArgument, "appearance jitter ranges must be non-negative (scale_jitter < 1)");
  if (!(ambient >= 0 && ambient <= 1)) throw Error(ErrorCode::InvalidArgument, "ambient must be in [0,1]");
  if ((base_albedo.array() < 0).any() || (base_albedo.array() > 1).any())
    throw Error(ErrorCode::InvalidArgument, "base albedo must be in [0,1]");
}

HandMesh build_proxy_hand(const HandDims& dims) {
  if (!dims.valid()) throw Error(ErrorCode::InvalidArgument, "invalid hand dimensions");
  HandMesh mesh;
  MeshBuilder b(mesh);

  constexpr double kIndexRadius = 0.009;
  b.capsule({dims.mcp, 0, 0}, {dims.tip - kIndexRadius, 0, 0}, kIndexRadius);
  b.box({dims.wrist + 0.02, -0.012, -0.014}, {dims.mcp + 0.01, 0.07, 0.014});
  for (int k = 1; k <= 3; ++k) {
    const double y = 0.02 * k;
    const Point3 knuckle(dims.mcp, y, 0.0);
    const Point3 bend(dims.mcp + 0.022, y, 0.004);
    b.capsule(knuckle, bend, 0.0085, 8, 2);
    b.capsule(bend, {dims.mcp + 0.008, y + 0.004, 0.02}, 0.008, 8, 2);
  }
  b.capsule({dims.wrist + 0.05, -0.004, 0.016}, {dims.mcp - 0.004, 0.01, 0.024}, 0.0095, 8, 2);
  b.capsule({dims.wrist - 0.06, 0.03, 0}, {dims.wrist + 0.01, 0.03, 0}, 0.024, 12, 2);
  return mesh;
}

AppearanceParams augment_appearance(const AppearanceConfig& cfg, Rng& rng) {
  double draws[6];
  for (double& d : draws) d = rng.uniform();

  AppearanceParams app;
  app.ambient = cfg.ambient;
  if (!cfg.enable) {
    app.albedo = cfg.base_albedo;
    app.scale = 1.0;
    app.light_dir = cfg.base_light_dir.normalized();
    return app;
  }
  for (int c = 0; c < 3; ++c)
    app.albedo[c] = std::clamp(cfg.base_albedo[c] + (2.0 * draws[c] - 1.0) * cfg.albedo_jitter, 0.0, 1.0);
  app.scale = 1.0 + (2.0 * draws[3] - 1.0) * cfg.scale_jitter;
  app.light_dir = perturb_in_cone(cfg.base_light_dir.normalized(), cfg.light_cone, draws[4], draws[5]);
  return app;
}

RenderedFrame render_frame(const SceneObservation& scene, const HandMesh& mesh, const HandPose& pose,
                           const AppearanceParams& app, const Intrinsics& K) {
  const int w = K.width;
  const int h = K.height;
  RenderedFrame out;
  out.rgb = scene.rgb;
  out.hand_mask = Mask::Zero(h, w);
  out.hand_depth = DepthMap::Zero(h, w);
  if (mesh.vertices.empty() || mesh.triangles.empty()) return out;

  std::vector<Point3> cam(mesh.vertices.size());
  std::vector<Pixel> px(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    cam[i] = pose.tip + pose.orientation * (app.scale * mesh.vertices[i]);
    if (cam[i].z() > kNearZ) px[i] = project(K, cam[i]);
  }

  std::vector<double> zbuf(static_cast<std::size_t>(w) * h, std::numeric_limits<double>::infinity());
  const Point3 to_light = -app.light_dir;

  for (const auto& t : mesh.triangles) {
    const Point3& p0 = cam[t[0]];
    const Point3& p1 = cam[t[1]];
    const Point3& p2 = cam[t[2]];
    // Triangles crossing the near plane are dropped rather than clipped.
    if (!(p0.z() > kNearZ && p1.z() > kNearZ && p2.z() > kNearZ)) continue;

    const Pixel& a = px[t[0]];
    const Pixel& b = px[t[1]];
    const Pixel& c = px[t[2]];
    const double area = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    if (std::abs(area) < 1e-12) continue;

    const int u0 = std::max(0, static_cast<int>(std::ceil(std::min({a.x(), b.x(), c.x()}))));
    const int u1 = std::min(w - 1, static_cast<int>(std::floor(std::max({a.x(), b.x(), c.x()}))));
    const int v0 = std::max(0, static_cast<int>(std::ceil(std::min({a.y(), b.y(), c.y()}))));
    const int v1 = std::min(h - 1, static_cast<int>(std::floor(std::max({a.y(), b.y(), c.y()}))));
    if (u0 > u1 || v0 > v1) continue;

    Point3 n = (p1 - p0).cross(p2 - p0).normalized();
    if (n.dot(p0) > 0) n = -n;  // face the camera; winding is not consistent
    const double shade = app.ambient + (1.0 - app.ambient) * std::max(0.0, n.dot(to_light));
    std::uint8_t color[3];
    for (int ch = 0; ch < 3; ++ch)
      color[ch] = static_cast<std::uint8_t>(std::clamp(std::lround(app.albedo[ch] * shade * 255.0), 0L, 255L));

    const double inv_area = 1.0 / area;
    const double iz0 = 1.0 / p0.z();
    const double iz1 = 1.0 / p1.z();
    const double iz2 = 1.0 / p2.z();
    for (int v = v0; v <= v1; ++v) {
      for (int u = u0; u <= u1; ++u) {
        const double l0 = ((b.x() - u) * (c.y() - v) - (b.y() - v) * (c.x() - u)) * inv_area;
        const double l1 = ((c.x() - u) * (a.y() - v) - (c.y() - v) * (a.x() - u)) * inv_area;
        const double l2 = 1.0 - l0 - l1;
        if (l0 < 0 || l1 < 0 || l2 < 0) continue;

        const double z = 1.0 / (l0 * iz0 + l1 * iz1 + l2 * iz2);
        const std::size_t idx = static_cast<std::size_t>(v) * w + u;
        if (!(z < zbuf[idx])) continue;
        const float scene_z = scene.depth(v, u);
        if (scene_z > 0 && !(z < scene_z)) continue;

        zbuf[idx] = z;
        out.hand_mask(v, u) = 1;
        out.hand_depth(v, u) = static_cast<float>(z);
        std::copy(color, color + 3, out.rgb.at(u, v));
      }
    }
  }
  return out;
}

}  // namespace gesture
