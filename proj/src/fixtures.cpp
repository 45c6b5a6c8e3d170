#include "gesture/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include <Eigen/Geometry>

#include "gesture/error.hpp"
#include "gesture/random.hpp"

namespace gesture::fixtures {
namespace {

using Vec = Eigen::Vector3d;

struct Hit {
  double t = std::numeric_limits<double>::infinity();
  Vec normal = Vec::UnitZ();
  int object = -1;  // -1 = table
};

struct Block {
  Vec center;  // base center on the table
  double side;
  double yaw;
  Vec color;
};

struct Plate {
  Vec center;
  double radius;
  double height;
};

struct Layout {
  std::vector<Block> blocks;
  std::vector<Plate> plates;
};

// Slab test against the block's oriented box.
void hit_block(const Block& b, const Vec& o, const Vec& d, int id, Hit& best) {
  const Eigen::Matrix3d to_local = Eigen::AngleAxisd(-b.yaw, Vec::UnitZ()).toRotationMatrix();
  const Vec lo = to_local * (o - b.center - Vec(0, 0, b.side / 2));
  const Vec ld = to_local * d;
  double t0 = 0.0;
  double t1 = best.t;
  int axis = -1;
  double sign = 1.0;
  for (int a = 0; a < 3; ++a) {
    const double h = b.side / 2;
    if (std::abs(ld[a]) < 1e-15) {
      if (lo[a] < -h || lo[a] > h) return;
      continue;
    }
    double ta = (-h - lo[a]) / ld[a];
    double tb = (h - lo[a]) / ld[a];
    double s = -1.0;
    if (ta > tb) {
      std::swap(ta, tb);
      s = 1.0;
    }
    if (ta > t0) {
      t0 = ta;
      axis = a;
      sign = s;
    }
    t1 = std::min(t1, tb);
    if (t0 > t1) return;
  }
  if (axis < 0 || t0 >= best.t) return;
  Vec n_local = Vec::Zero();
  n_local[axis] = sign;
  best = {t0, to_local.transpose() * n_local, id};
}

void hit_plate(const Plate& p, const Vec& o, const Vec& d, int id, Hit& best) {
  // Top cap.
  if (d.z() < 0) {
    const double t = (p.height - o.z()) / d.z();
    const Vec q = o + t * d;
    if (t > 0 && t < best.t && (q.head<2>() - p.center.head<2>()).squaredNorm() <= p.radius * p.radius)
      best = {t, Vec::UnitZ(), id};
  }
  // Side wall.
  const Eigen::Vector2d oc = o.head<2>() - p.center.head<2>();
  const Eigen::Vector2d dd = d.head<2>();
  const double a = dd.squaredNorm();
  const double b = 2 * oc.dot(dd);
  const double c = oc.squaredNorm() - p.radius * p.radius;
  const double disc = b * b - 4 * a * c;
  if (a < 1e-15 || disc < 0) return;
  const double t = (-b - std::sqrt(disc)) / (2 * a);
  const Vec q = o + t * d;
  if (t > 0 && t < best.t && q.z() >= 0 && q.z() <= p.height) {
    Vec n(q.x() - p.center.x(), q.y() - p.center.y(), 0);
    best = {t, n.normalized(), id};
  }
}

double footprint_radius(const Block& b) { return b.side * std::sqrt(0.5); }

Layout sample_layout(Rng& rng, const TabletopConfig& cfg, const Vec& look_at) {
  static const Vec kBlockColors[] = {{0.80, 0.15, 0.12}, {0.15, 0.55, 0.20}, {0.15, 0.30, 0.75},
                                     {0.90, 0.75, 0.10}, {0.60, 0.20, 0.65}, {0.95, 0.45, 0.10}};
  Layout layout;
  const int n_blocks = cfg.min_blocks + static_cast<int>(rng.below(cfg.max_blocks - cfg.min_blocks + 1));
  const int n_plates = cfg.min_plates + static_cast<int>(rng.below(cfg.max_plates - cfg.min_plates + 1));
  const double half_x = 0.26 * cfg.spread;
  const double half_y = 0.17 * cfg.spread;
  const double clearance = 0.07 * cfg.spread;

  std::vector<std::pair<Vec, double>> placed;  // center, footprint radius
  auto place = [&](double radius) -> std::optional<Vec> {
    for (int attempt = 0; attempt < 500; ++attempt) {
      const Vec c(look_at.x() + rng.uniform(-half_x, half_x), look_at.y() + rng.uniform(-half_y, half_y), 0.0);
      bool ok = true;
      for (const auto& [pc, pr] : placed)
        if ((pc - c).norm() < pr + radius + clearance) ok = false;
      if (ok) {
        placed.emplace_back(c, radius);
        return c;
      }
    }
    return std::nullopt;
  };

  for (int i = 0; i < n_plates; ++i) {
    Plate p;
    p.radius = rng.uniform(0.055, 0.075) * std::min(1.0, cfg.spread * 1.5);
    p.height = 0.012;
    const auto c = place(p.radius);
    if (!c) return {};
    p.center = *c;
    layout.plates.push_back(p);
  }
  for (int i = 0; i < n_blocks; ++i) {
    Block b;
    b.side = rng.uniform(0.035, 0.05) * std::min(1.0, cfg.spread * 1.5);
    b.yaw = rng.uniform(0.0, M_PI / 2);
    b.color = kBlockColors[rng.below(std::size(kBlockColors))];
    const auto c = place(footprint_radius(b));
    if (!c) return {};
    b.center = *c;
    layout.blocks.push_back(b);
  }
  return layout;
}

bool boxes_separated(const BBox& a, const BBox& b, int gap) {
  return a.x_max + gap < b.x_min || b.x_max + gap < a.x_min || a.y_max + gap < b.y_min || b.y_max + gap < a.y_min;
}

}  // namespace

SceneObservation make_tabletop_scene(std::uint64_t seed, const std::string& scene_id, const TabletopConfig& cfg) {
  Rng rng(StableHash().add_u64(seed).add(scene_id).digest());
  const int w = cfg.width;
  const int h = cfg.height;

  for (int attempt = 0; attempt < 200; ++attempt) {
    const double cam_height = rng.uniform(0.55, 0.75);
    const double pitch = rng.uniform(0.80, 1.10);  // optical axis below horizontal, radians
    const Vec cam_pos(0.0, 0.0, cam_height);
    const Vec fwd(0.0, std::cos(pitch), -std::sin(pitch));
    const Vec right(1.0, 0.0, 0.0);
    const Vec down = fwd.cross(right);
    Eigen::Matrix3d cam_to_world;
    cam_to_world << right, down, fwd;
    const Vec look_at(0.0, cam_height / std::tan(pitch), 0.0);

    const Layout layout = sample_layout(rng, cfg, look_at);
    if (layout.blocks.empty()) continue;

    SceneObservation scene;
    scene.scene_id = scene_id;
    scene.intrinsics = {cfg.focal, cfg.focal, (w - 1) / 2.0, (h - 1) / 2.0, w, h, 0.001};
    scene.rgb = RgbImage(w, h);
    scene.depth = DepthMap::Zero(h, w);
    const std::size_t n_objects = layout.plates.size() + layout.blocks.size();
    std::vector<BBox> boxes(n_objects, BBox{w, h, -1, -1});

    const Vec light = Vec(0.3, -0.4, 1.0).normalized();
    for (int v = 0; v < h; ++v) {
      for (int u = 0; u < w; ++u) {
        const Vec ray_cam((u - scene.intrinsics.cx) / cfg.focal, (v - scene.intrinsics.cy) / cfg.focal, 1.0);
        const Vec d = cam_to_world * ray_cam;
        Hit hit;
        if (d.z() < 0) hit = {-cam_pos.z() / d.z(), Vec::UnitZ(), -1};
        int id = 0;
        for (const Plate& p : layout.plates) hit_plate(p, cam_pos, d, id++, hit);
        for (const Block& b : layout.blocks) hit_block(b, cam_pos, d, id++, hit);

        std::uint8_t* px = scene.rgb.at(u, v);
        if (!std::isfinite(hit.t)) {
          px[0] = 200, px[1] = 205, px[2] = 210;
          continue;
        }
        const Vec q = cam_pos + hit.t * d;
        Vec base;
        if (hit.object < 0) {
          const double grain = 0.9 + 0.1 * std::sin(45.0 * q.x() + 3.0 * std::sin(9.0 * q.y()));
          base = grain * Vec(0.62, 0.46, 0.30);
        } else if (hit.object < static_cast<int>(layout.plates.size())) {
          base = Vec(0.93, 0.93, 0.90);
        } else {
          base = layout.blocks[hit.object - layout.plates.size()].color;
        }
        const double shade = 0.45 + 0.55 * std::max(0.0, hit.normal.dot(light));
        for (int c = 0; c < 3; ++c)
          px[c] = static_cast<std::uint8_t>(std::clamp(std::lround(base[c] * shade * 255.0), 0L, 255L));

        // Camera z equals t because ray_cam has unit z.
        scene.depth(v, u) = static_cast<float>(std::round(hit.t * 1000.0) / 1000.0);
        if (hit.object >= 0) {
          BBox& box = boxes[hit.object];
          box.x_min = std::min(box.x_min, u);
          box.y_min = std::min(box.y_min, v);
          box.x_max = std::max(box.x_max, u);
          box.y_max = std::max(box.y_max, v);
        }
      }
    }

    bool ok = true;
    const int m = cfg.edge_margin_px;
    for (const BBox& b : boxes)
      ok &= b.x_max >= 0 && b.x_min >= m && b.y_min >= m && b.x_max < w - m && b.y_max < h - m;
    for (std::size_t i = 0; ok && i < boxes.size(); ++i)
      for (std::size_t j = i + 1; j < boxes.size(); ++j) ok &= boxes_separated(boxes[i], boxes[j], cfg.min_box_gap_px);
    if (!ok) continue;

    for (std::size_t i = 0; i < n_objects; ++i) {
      const bool plate = i < layout.plates.size();
      scene.candidates.push_back({plate ? "plate" : "block", boxes[i], 0.8 + 0.19 * rng.uniform()});
    }
    for (int v = 0; v < h; ++v)
      for (int u = 0; u < w; ++u)
        if (rng.uniform() < cfg.dropout) scene.depth(v, u) = 0.0f;
    scene.validate();
    return scene;
  }
  throw Error(ErrorCode::InvalidArgument, "could not lay out fixture scene " + scene_id);
}

std::vector<std::filesystem::path> write_tabletop_scenes(const std::filesystem::path& dir, int count,
                                                         std::uint64_t seed, const TabletopConfig& cfg) {
  std::vector<std::filesystem::path> out;
  for (int i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "scene_%03d", i);
    const std::filesystem::path p = dir / name;
    save_scene(p, make_tabletop_scene(seed, name, cfg));
    out.push_back(p);
  }
  return out;
}

}  // namespace gesture::fixtures
