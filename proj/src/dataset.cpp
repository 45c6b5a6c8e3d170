#include "gesture/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "gesture/error.hpp"

namespace gesture {

using nlohmann::json;

std::string template_instruction(int task_type, int n_picks) {
  switch (task_type) {
    case 0:
      return "Pick this up and put it there.";
    case 1:
      return "Pick these up in order and put them there.";
    default:
      throw Error(ErrorCode::UnknownTaskType,
                  "task type " + std::to_string(task_type) + " (n_picks " + std::to_string(n_picks) + ")");
  }
}

std::string frame_filename(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d.png", index);
  return buf;
}

namespace {

template <typename Derived>
json vec_json(const Eigen::MatrixBase<Derived>& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

template <typename Vector>
Vector vec_from(const json& j) {
  Vector v;
  if (static_cast<Eigen::Index>(j.size()) != v.size()) throw Error(ErrorCode::ParseError, "vector length mismatch");
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j.at(i).get<typename Vector::Scalar>();
  return v;
}

json target_json(const GroundedTarget& t) {
  return {{"role", to_string(t.role)},
          {"order", t.order},
          {"candidate_index", t.candidate_index},
          {"label", t.label},
          {"point_px", vec_json(t.point_px)},
          {"point_norm", vec_json(t.point_norm)},
          {"point_3d", vec_json(t.point_3d)},
          {"loc_tokens", {t.loc_tokens[0], t.loc_tokens[1]}}};
}

GroundedTarget target_from(const json& j) {
  GroundedTarget t;
  t.role = role_from_string(j.at("role").get<std::string>());
  t.order = j.at("order").get<int>();
  t.candidate_index = j.at("candidate_index").get<int>();
  t.label = j.at("label").get<std::string>();
  t.point_px = vec_from<Eigen::Vector2i>(j.at("point_px"));
  t.point_norm = vec_from<Eigen::Vector2d>(j.at("point_norm"));
  t.point_3d = vec_from<Point3>(j.at("point_3d"));
  t.loc_tokens = {j.at("loc_tokens").at(0).get<int>(), j.at("loc_tokens").at(1).get<int>()};
  return t;
}

json appearance_json(const AppearanceParams& a) {
  return {{"albedo", vec_json(a.albedo)},
          {"scale", a.scale},
          {"light_dir", vec_json(a.light_dir)},
          {"ambient", a.ambient}};
}

AppearanceParams appearance_from(const json& j) {
  AppearanceParams a;
  a.albedo = vec_from<Eigen::Vector3d>(j.at("albedo"));
  a.scale = j.at("scale").get<double>();
  a.light_dir = vec_from<Point3>(j.at("light_dir"));
  a.ambient = j.at("ambient").get<double>();
  return a;
}

void dump_into(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out.push_back('{');
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out.push_back(',');
        first = false;
        out += json(it.key()).dump();
        out.push_back(':');
        dump_into(it.value(), out);
      }
      out.push_back('}');
      break;
    }
    case json::value_t::array: {
      out.push_back('[');
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out.push_back(',');
        dump_into(j[i], out);
      }
      out.push_back(']');
      break;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "cannot serialize a non-finite number");
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.9g", v == 0.0 ? 0.0 : v);
      out += buf;
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

json to_json(const MotionConfig& m) {
  return {{"tau", m.tau},
          {"delta", m.delta},
          {"approach_steps", m.approach_steps},
          {"hold_frames", m.hold_frames},
          {"transfer_frames", m.transfer_frames},
          {"h_max", m.h_max},
          {"n_up", vec_json(m.n_up)},
          {"cone_half_angle", m.cone_half_angle},
          {"max_direction_retries", m.max_direction_retries},
          {"min_step_px", m.min_step_px}};
}

MotionConfig motion_from_json(const json& j, MotionConfig m) {
  m.tau = j.value("tau", m.tau);
  m.delta = j.value("delta", m.delta);
  m.approach_steps = j.value("approach_steps", m.approach_steps);
  m.hold_frames = j.value("hold_frames", m.hold_frames);
  m.transfer_frames = j.value("transfer_frames", m.transfer_frames);
  m.h_max = j.value("h_max", m.h_max);
  if (j.contains("n_up")) m.n_up = vec_from<Point3>(j.at("n_up"));
  m.cone_half_angle = j.value("cone_half_angle", m.cone_half_angle);
  m.max_direction_retries = j.value("max_direction_retries", m.max_direction_retries);
  m.min_step_px = j.value("min_step_px", m.min_step_px);
  return m;
}

json to_json(const Sample& s) {
  json keyframes = json::array();
  for (const auto& k : s.keyframes) {
    json kps = json::array();
    for (const auto& p : k.keypoints.keypoints) kps.push_back(vec_json(p));
    keyframes.push_back({{"frame", k.frame}, {"keypoints", kps}, {"feature", vec_json(k.feature)}});
  }
  json supervision = json::array();
  for (const auto& t : s.supervision) supervision.push_back(target_json(t));
  json holds = json::array();
  for (const auto& h : s.meta.holds)
    holds.push_back({{"target_order", h.target_order}, {"start_frame", h.start_frame}, {"end_frame", h.end_frame}});

  return {{"sample_id", s.sample_id},
          {"scene_id", s.scene_id},
          {"task_type", s.task_type},
          {"instruction", s.instruction},
          {"frames_dir", s.frames_dir},
          {"num_frames", s.num_frames},
          {"image_size", {s.image_width, s.image_height}},
          {"keyframes", keyframes},
          {"supervision", supervision},
          {"meta",
           {{"seed", s.meta.seed},
            {"motion", to_json(s.meta.motion)},
            {"appearance", appearance_json(s.meta.appearance)},
            {"grounding", {{"enable_jitter", s.meta.enable_jitter}, {"jitter_frac", s.meta.jitter_frac}}},
            {"holds", holds},
            {"generator_version", s.meta.generator_version}}}};
}

Sample sample_from_json(const json& j) {
  Sample s;
  s.sample_id = j.at("sample_id").get<std::string>();
  s.scene_id = j.at("scene_id").get<std::string>();
  s.task_type = j.at("task_type").get<int>();
  s.instruction = j.at("instruction").get<std::string>();
  s.frames_dir = j.at("frames_dir").get<std::string>();
  s.num_frames = j.at("num_frames").get<int>();
  s.image_width = j.at("image_size").at(0).get<int>();
  s.image_height = j.at("image_size").at(1).get<int>();
  for (const json& k : j.at("keyframes")) {
    KeyframeRecord rec;
    rec.frame = k.at("frame").get<int>();
    rec.keypoints.frame_index = rec.frame;
    const json& kps = k.at("keypoints");
    if (kps.size() != 4) throw Error(ErrorCode::ParseError, "keyframe needs exactly 4 keypoints");
    for (std::size_t i = 0; i < 4; ++i) rec.keypoints.keypoints[i] = vec_from<Eigen::Vector3d>(kps.at(i));
    rec.feature = vec_from<GestureFeature>(k.at("feature"));
    s.keyframes.push_back(rec);
  }
  for (const json& t : j.at("supervision")) s.supervision.push_back(target_from(t));
  const json& meta = j.at("meta");
  s.meta.seed = meta.at("seed").get<std::uint64_t>();
  s.meta.motion = motion_from_json(meta.at("motion"));
  s.meta.appearance = appearance_from(meta.at("appearance"));
  s.meta.enable_jitter = meta.at("grounding").at("enable_jitter").get<bool>();
  s.meta.jitter_frac = meta.at("grounding").at("jitter_frac").get<double>();
  for (const json& h : meta.at("holds"))
    s.meta.holds.push_back(
        {h.at("target_order").get<int>(), h.at("start_frame").get<int>(), h.at("end_frame").get<int>()});
  s.meta.generator_version = meta.at("generator_version").get<std::string>();
  return s;
}

json to_json(const ManifestHeader& h) {
  return {{"manifest_header",
           {{"global_seed", h.global_seed},
            {"config_hash", h.config_hash},
            {"num_samples", h.num_samples},
            {"num_skipped", h.num_skipped},
            {"n_bins", h.n_bins},
            {"scenes_dir", h.scenes_dir},
            {"generator_version", h.generator_version}}}};
}

ManifestHeader header_from_json(const json& j) {
  const json& b = j.at("manifest_header");
  ManifestHeader h;
  h.global_seed = b.at("global_seed").get<std::uint64_t>();
  h.config_hash = b.at("config_hash").get<std::string>();
  h.num_samples = b.at("num_samples").get<int>();
  h.num_skipped = b.value("num_skipped", 0);
  h.n_bins = b.value("n_bins", kDefaultBins);
  h.scenes_dir = b.value("scenes_dir", std::string());
  h.generator_version = b.value("generator_version", std::string(kGeneratorVersion));
  return h;
}

std::string canonical_dump(const json& j) {
  std::string out;
  dump_into(j, out);
  return out;
}

std::vector<std::string> check_sample(const Sample& s, const std::filesystem::path& dataset_root, int n_bins,
                                      bool check_files) {
  std::vector<std::string> problems;
  auto bad = [&](std::string msg) { problems.push_back(std::move(msg)); };

  if (s.sample_id.empty()) bad("empty sample_id");
  if (s.num_frames < 1) bad("num_frames must be >= 1");
  if (s.image_width < 1 || s.image_height < 1) bad("image size must be positive");

  if (s.keyframes.size() != s.meta.holds.size())
    bad("keyframe count " + std::to_string(s.keyframes.size()) + " != hold count " +
        std::to_string(s.meta.holds.size()));
  for (std::size_t k = 0; k < s.keyframes.size(); ++k) {
    const KeyframeRecord& kf = s.keyframes[k];
    const std::string tag = "keyframe " + std::to_string(k) + ": ";
    if (kf.frame < 0 || kf.frame >= s.num_frames) bad(tag + "frame index outside [0, num_frames)");
    if (k > 0 && kf.frame <= s.keyframes[k - 1].frame) bad(tag + "frames not strictly increasing");
    if (k < s.meta.holds.size()) {
      const Hold& h = s.meta.holds[k];
      if (kf.frame < h.start_frame || kf.frame > h.end_frame) bad(tag + "outside its hold range");
    }
    if (!kf.keypoints.valid()) bad(tag + "keypoint depth d must be finite and > 0");
    const GestureFeature expect = encode_feature(kf.keypoints, std::max(1, s.image_width), std::max(1, s.image_height));
    if (!((expect - kf.feature).cwiseAbs().maxCoeff() <= 1e-6)) bad(tag + "feature does not match keypoints");
  }
  for (std::size_t k = 0; k < s.meta.holds.size(); ++k) {
    const Hold& h = s.meta.holds[k];
    if (h.start_frame > h.end_frame || h.start_frame < 0 || h.end_frame >= s.num_frames ||
        (k > 0 && h.start_frame <= s.meta.holds[k - 1].end_frame))
      bad("hold " + std::to_string(k) + " range invalid");
    if (h.target_order != static_cast<int>(k)) bad("hold " + std::to_string(k) + " out of plan order");
  }

  if (s.supervision.empty()) bad("no supervision targets");
  bool has_pick = false;
  for (std::size_t i = 0; i < s.supervision.size(); ++i) {
    const GroundedTarget& t = s.supervision[i];
    const std::string tag = "target " + std::to_string(i) + ": ";
    if (t.order != static_cast<int>(i)) bad(tag + "orders not contiguous from 0");
    has_pick |= t.role == TargetRole::Pick;
    if (t.point_px.x() < 0 || t.point_px.y() < 0 || t.point_px.x() >= s.image_width ||
        t.point_px.y() >= s.image_height)
      bad(tag + "point_px outside image");
    if (!(t.point_3d.z() > 0)) bad(tag + "point_3d.z must be > 0");
    const Eigen::Vector2d norm(static_cast<double>(t.point_px.x()) / std::max(1, s.image_width),
                               static_cast<double>(t.point_px.y()) / std::max(1, s.image_height));
    if (!((norm - t.point_norm).cwiseAbs().maxCoeff() <= 1e-8)) bad(tag + "point_norm does not match point_px");
    try {
      if (t.loc_tokens[0] != discretize_coord(t.point_norm.x(), n_bins) ||
          t.loc_tokens[1] != discretize_coord(t.point_norm.y(), n_bins))
        bad(tag + "loc_tokens do not re-derive from point_norm");
    } catch (const Error& e) {
      bad(tag + e.what());
    }
  }
  if (!s.supervision.empty() && !has_pick) bad("no pick target");
  if (s.keyframes.size() != s.supervision.size())
    bad("keyframe count " + std::to_string(s.keyframes.size()) + " != target count " +
        std::to_string(s.supervision.size()));

  if (check_files) {
    const std::filesystem::path dir = dataset_root / s.frames_dir;
    for (int i = 0; i < s.num_frames; ++i) {
      const std::filesystem::path f = dir / frame_filename(i);
      if (!std::filesystem::exists(f)) {
        bad("missing frame file " + f.string());
        continue;
      }
      try {
        const auto [w, h] = png_size(f);
        if (w != s.image_width || h != s.image_height) bad("frame " + f.string() + " has wrong dimensions");
      } catch (const Error& e) {
        bad("unreadable frame " + f.string() + ": " + e.what());
      }
    }
    if (std::filesystem::exists(dir / frame_filename(s.num_frames))) bad("more frame files than num_frames");
  }
  return problems;
}

Sample assemble_sample(const AssembleInputs& in) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::InconsistentSample, in.sample_id + ": " + what);
  };
  if (!in.scene || !in.plan || !in.trajectory || !in.keypoints) fail("missing generation parts");
  const SceneObservation& scene = *in.scene;
  const GestureTrajectory& traj = *in.trajectory;
  if (in.keypoints->size() != traj.frames.size()) fail("keypoint frames do not match trajectory length");
  if (in.keyframes.size() != traj.holds.size())
    fail("keyframe count " + std::to_string(in.keyframes.size()) + " != hold count " +
         std::to_string(traj.holds.size()));
  if (in.features.size() != in.keyframes.size()) fail("feature count != keyframe count");
  if (traj.holds.size() != in.plan->targets.size()) fail("hold count != plan target count");

  Sample s;
  s.sample_id = in.sample_id;
  s.scene_id = scene.scene_id;
  s.task_type = in.plan->task_type;
  s.instruction = in.instruction;
  s.frames_dir = (std::filesystem::path("samples") / in.sample_id / "frames").generic_string();
  s.num_frames = static_cast<int>(traj.frames.size());
  s.image_width = scene.width();
  s.image_height = scene.height();
  for (std::size_t k = 0; k < in.keyframes.size(); ++k) {
    const int f = in.keyframes[k];
    if (f < 0 || f >= s.num_frames) fail("keyframe index outside trajectory");
    KeyframeRecord rec;
    rec.frame = f;
    rec.keypoints = (*in.keypoints)[f];
    rec.feature = in.features[k];
    if (rec.feature != encode_feature(rec.keypoints, s.image_width, s.image_height))
      fail("feature " + std::to_string(k) + " does not match its keyframe");
    s.keyframes.push_back(rec);
  }
  s.supervision = in.plan->targets;
  s.meta = in.meta;
  s.meta.holds = traj.holds;

  const std::vector<std::string> problems = check_sample(s, in.dataset_root, in.n_bins, true);
  if (!problems.empty()) fail(problems.front());
  return s;
}

std::filesystem::path write_manifest(const std::vector<Sample>& samples, const ManifestHeader& header,
                                     const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path path = out_dir / "manifest.jsonl";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  ManifestHeader h = header;
  h.num_samples = static_cast<int>(samples.size());
  out << canonical_dump(to_json(h)) << '\n';
  for (const Sample& s : samples) out << canonical_dump(to_json(s)) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
  return path;
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  Manifest m;
  std::string line;
  int line_no = 0;
  int expected_in_segment = -1;
  int seen_in_segment = 0;
  auto close_segment = [&]() {
    if (expected_in_segment >= 0 && seen_in_segment != expected_in_segment)
      throw Error(ErrorCode::ParseError, path.string() + ": header announces " +
                                             std::to_string(expected_in_segment) + " samples, found " +
                                             std::to_string(seen_in_segment));
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      if (j.contains("manifest_header")) {
        close_segment();
        m.headers.push_back(header_from_json(j));
        expected_in_segment = m.headers.back().num_samples;
        seen_in_segment = 0;
      } else {
        m.samples.push_back(sample_from_json(j));
        ++seen_in_segment;
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, path.string() + ": line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ParseError) throw;
      throw Error(ErrorCode::ParseError, path.string() + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  close_segment();
  if (m.headers.empty()) throw Error(ErrorCode::ParseError, path.string() + ": no manifest header");
  return m;
}

bool DatasetValidation::ok() const { return manifest_problems.empty() && failed() == 0; }

int DatasetValidation::failed() const {
  int n = 0;
  for (const auto& s : samples) n += !s.ok();
  return n;
}

DatasetValidation validate_dataset(const std::filesystem::path& dir) {
  DatasetValidation report;
  Manifest m;
  try {
    m = read_manifest(dir / "manifest.jsonl");
  } catch (const Error& e) {
    report.manifest_problems.push_back(e.what());
    return report;
  }
  const int n_bins = m.headers.front().n_bins;
  std::set<std::string> seen;
  for (const Sample& s : m.samples) {
    SampleValidation v{s.sample_id, check_sample(s, dir, n_bins, true)};
    if (!seen.insert(s.sample_id).second) v.problems.push_back("duplicate sample_id");
    report.samples.push_back(std::move(v));
  }
  return report;
}

}  // namespace gesture
