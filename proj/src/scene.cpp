#include "gesture/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "gesture/error.hpp"

namespace gesture {

using nlohmann::json;

void SceneObservation::validate() const {
  auto fail = [&](const std::string& what) { throw Error(ErrorCode::InvalidArgument, scene_id + ": " + what); };
  if (!intrinsics.valid()) fail("invalid camera intrinsics");
  if (rgb.width != intrinsics.width || rgb.height != intrinsics.height) fail("rgb size does not match camera");
  if (depth.cols() != intrinsics.width || depth.rows() != intrinsics.height) fail("depth size does not match camera");
  if (!(depth.isFinite().all() && (depth >= 0).all())) fail("depth must be finite and non-negative");
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (!candidates[i].bbox.within(intrinsics.width, intrinsics.height))
      fail("candidate " + std::to_string(i) + " bbox out of bounds");
}

double robust_depth_at(const DepthMap& depth, int u, int v, int half_window) {
  const int w = static_cast<int>(depth.cols());
  const int h = static_cast<int>(depth.rows());
  if (u < 0 || v < 0 || u >= w || v >= h || half_window < 0)
    throw Error(ErrorCode::InvalidArgument, "robust_depth_at: pixel outside image");

  thread_local std::vector<float> values;
  values.clear();
  for (int y = std::max(0, v - half_window); y <= std::min(h - 1, v + half_window); ++y)
    for (int x = std::max(0, u - half_window); x <= std::min(w - 1, u + half_window); ++x)
      if (depth(y, x) > 0) values.push_back(depth(y, x));
  if (values.empty()) throw Error(ErrorCode::NoValidDepth, "no valid depth near pixel");

  auto mid = values.begin() + (values.size() - 1) / 2;
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

std::vector<Point3> bbox_point_cloud(const SceneObservation& scene, const BBox& bbox, int stride) {
  if (stride < 1) throw Error(ErrorCode::InvalidArgument, "stride must be >= 1");
  std::vector<Point3> cloud;
  for (int v = bbox.y_min; v <= bbox.y_max; v += stride) {
    for (int u = bbox.x_min; u <= bbox.x_max; u += stride) {
      const double z = scene.depth(v, u);
      if (z > 0) cloud.push_back(backproject<double>(scene.intrinsics, u, v, z));
    }
  }
  return cloud;
}

namespace {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

SceneObservation load_scene(const std::filesystem::path& dir) {
  SceneObservation scene;
  scene.scene_id = dir.filename().string();
  try {
    const json cam = read_json(dir / "camera.json");
    scene.intrinsics.fx = cam.at("fx").get<double>();
    scene.intrinsics.fy = cam.at("fy").get<double>();
    scene.intrinsics.cx = cam.at("cx").get<double>();
    scene.intrinsics.cy = cam.at("cy").get<double>();
    scene.intrinsics.width = cam.at("width").get<int>();
    scene.intrinsics.height = cam.at("height").get<int>();
    scene.intrinsics.depth_scale = cam.value("depth_scale", 0.001);

    for (const json& obj : read_json(dir / "objects.json")) {
      ObjectCandidate c;
      c.label = obj.at("label").get<std::string>();
      const auto& b = obj.at("bbox");
      c.bbox = {b.at(0).get<int>(), b.at(1).get<int>(), b.at(2).get<int>(), b.at(3).get<int>()};
      c.score = obj.value("score", 1.0);
      scene.candidates.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, dir.string() + ": " + e.what());
  }
  scene.rgb = read_png_rgb(dir / "rgb.png");
  scene.depth = read_png_depth(dir / "depth.png", scene.intrinsics.depth_scale);
  scene.validate();
  return scene;
}

void save_scene(const std::filesystem::path& dir, const SceneObservation& scene) {
  std::filesystem::create_directories(dir);
  const Intrinsics& K = scene.intrinsics;
  write_json(dir / "camera.json", json{{"fx", K.fx},
                                       {"fy", K.fy},
                                       {"cx", K.cx},
                                       {"cy", K.cy},
                                       {"width", K.width},
                                       {"height", K.height},
                                       {"depth_scale", K.depth_scale}});
  json objects = json::array();
  for (const auto& c : scene.candidates)
    objects.push_back(
        {{"label", c.label}, {"bbox", {c.bbox.x_min, c.bbox.y_min, c.bbox.x_max, c.bbox.y_max}}, {"score", c.score}});
  write_json(dir / "objects.json", objects);
  write_png_rgb(dir / "rgb.png", scene.rgb, 6);
  write_png_depth(dir / "depth.png", scene.depth, K.depth_scale);
}

std::vector<SceneObservation> load_scenes(const std::filesystem::path& scenes_dir) {
  if (!std::filesystem::is_directory(scenes_dir))
    throw Error(ErrorCode::IoError, "scenes directory not found: " + scenes_dir.string());
  std::vector<std::filesystem::path> dirs;
  for (const auto& entry : std::filesystem::directory_iterator(scenes_dir))
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "camera.json")) dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());

  std::vector<SceneObservation> scenes;
  scenes.reserve(dirs.size());
  for (const auto& d : dirs) scenes.push_back(load_scene(d));
  return scenes;
}

}  // namespace gesture
