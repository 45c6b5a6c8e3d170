#include "gesture/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "gesture/random.hpp"
#include "gesture/scene.hpp"

namespace gesture {

using nlohmann::json;

namespace {

template <typename Derived>
json vec_json(const Eigen::MatrixBase<Derived>& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::Vector3d vec3_from(const json& j) {
  if (j.size() != 3) throw Error(ErrorCode::ParseError, "expected a 3-vector");
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

const TaskSpec& pick_task(const std::vector<TaskSpec>& mix, Rng& rng) {
  double total = 0.0;
  for (const auto& t : mix) total += t.weight;
  double x = rng.uniform() * total;
  for (const auto& t : mix) {
    if (x < t.weight) return t;
    x -= t.weight;
  }
  for (auto it = mix.rbegin(); it != mix.rend(); ++it)
    if (it->weight > 0) return *it;
  return mix.back();
}

struct SampleContext {
  const RunConfig& cfg;
  const HandMesh& mesh;
  const ManifestHeader& header;
};

Sample generate_one(const SampleContext& ctx, const SceneObservation& scene, int index) {
  const RunConfig& cfg = ctx.cfg;
  const std::string id = sample_id_for(index);
  const std::uint64_t seed = sample_seed(cfg.global_seed, scene.scene_id, index);
  Rng root(seed);
  Rng task_rng = root.fork("task");
  Rng ground_rng = root.fork("grounding");
  Rng motion_rng = root.fork("motion");
  Rng appearance_rng = root.fork("appearance");

  const TaskSpec& task = pick_task(cfg.task_mix, task_rng);
  const int n_picks = task.n_picks_min + static_cast<int>(task_rng.below(task.n_picks_max - task.n_picks_min + 1));

  GroundingConfig gcfg = cfg.grounding;
  gcfg.pick_labels = task.pick_labels;
  gcfg.place_labels = task.place_labels;
  gcfg.n_bins = cfg.n_bins;
  const TaskPlan plan = sample_task_plan(scene, task.task_type, n_picks, gcfg, ground_rng);
  const GestureTrajectory traj = compose_trajectory(plan, scene.intrinsics, cfg.motion, motion_rng, cfg.hand);
  const AppearanceParams app = augment_appearance(cfg.appearance, appearance_rng);
  const std::string instruction = template_instruction(task.instruction_template_id, n_picks);

  const std::vector<KeypointFrame> keypoints = project_trajectory(traj, cfg.hand, scene.intrinsics);
  const std::vector<int> keyframes = select_keyframes(keypoints, cfg.keyframes);
  if (keyframes.size() != traj.holds.size())
    throw Error(ErrorCode::InconsistentSample, id + ": detected " + std::to_string(keyframes.size()) +
                                                   " keyframes for " + std::to_string(traj.holds.size()) + " holds");
  std::vector<GestureFeature> features;
  for (int f : keyframes) features.push_back(encode_feature(keypoints[f], scene.width(), scene.height()));

  const std::filesystem::path sample_dir = cfg.out_dir / "samples" / id;
  std::filesystem::create_directories(sample_dir / "frames");
  if (cfg.write_masks) std::filesystem::create_directories(sample_dir / "masks");
  for (std::size_t f = 0; f < traj.frames.size(); ++f) {
    const std::string name = frame_filename(static_cast<int>(f));
    // Holds repeat the previous pose exactly; copy the encoded file instead of re-rendering.
    if (f > 0 && traj.frames[f] == traj.frames[f - 1]) {
      const std::string prev = frame_filename(static_cast<int>(f - 1));
      std::filesystem::copy_file(sample_dir / "frames" / prev, sample_dir / "frames" / name,
                                 std::filesystem::copy_options::overwrite_existing);
      if (cfg.write_masks)
        std::filesystem::copy_file(sample_dir / "masks" / prev, sample_dir / "masks" / name,
                                   std::filesystem::copy_options::overwrite_existing);
      continue;
    }
    const RenderedFrame frame = render_frame(scene, ctx.mesh, traj.frames[f], app, scene.intrinsics);
    write_png_rgb(sample_dir / "frames" / name, frame.rgb, 1);
    if (cfg.write_masks) write_png_mask(sample_dir / "masks" / name, frame.hand_mask);
  }

  AssembleInputs in;
  in.dataset_root = cfg.out_dir;
  in.sample_id = id;
  in.scene = &scene;
  in.plan = &plan;
  in.trajectory = &traj;
  in.keypoints = &keypoints;
  in.keyframes = keyframes;
  in.features = features;
  in.instruction = instruction;
  in.meta.seed = seed;
  in.meta.motion = cfg.motion;
  in.meta.appearance = app;
  in.meta.enable_jitter = cfg.grounding.enable_jitter;
  in.meta.jitter_frac = cfg.grounding.jitter_frac;
  in.n_bins = cfg.n_bins;
  return assemble_sample(in);
}

void draw_point(RgbImage& img, int u, int v, const std::uint8_t color[3]) {
  if (u < 0 || v < 0 || u >= img.width || v >= img.height) return;
  std::copy(color, color + 3, img.at(u, v));
}

void draw_line(RgbImage& img, Pixel a, Pixel b, const std::uint8_t color[3]) {
  const double len = (b - a).norm();
  const int steps = std::max(1, static_cast<int>(std::ceil(len)));
  for (int i = 0; i <= steps; ++i) {
    const Pixel p = a + (b - a) * (static_cast<double>(i) / steps);
    draw_point(img, static_cast<int>(std::lround(p.x())), static_cast<int>(std::lround(p.y())), color);
  }
}

void draw_cross(RgbImage& img, int u, int v, int r, const std::uint8_t color[3]) {
  for (int k = -r; k <= r; ++k) {
    draw_point(img, u + k, v, color);
    draw_point(img, u, v + k, color);
  }
}

std::filesystem::path resolve_scenes_dir(const Manifest& m, const std::optional<std::filesystem::path>& override_dir) {
  if (override_dir) return *override_dir;
  return m.headers.front().scenes_dir;
}

class SceneCache {
 public:
  explicit SceneCache(std::filesystem::path dir) : dir_(std::move(dir)) {}
  const SceneObservation& get(const std::string& scene_id) {
    auto it = scenes_.find(scene_id);
    if (it == scenes_.end()) it = scenes_.emplace(scene_id, load_scene(dir_ / scene_id)).first;
    return it->second;
  }

 private:
  std::filesystem::path dir_;
  std::map<std::string, SceneObservation> scenes_;
};

}  // namespace

void RunConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (num_samples < 1) fail("num_samples must be >= 1");
  if (workers < 1) fail("workers must be >= 1");
  if (task_mix.empty()) fail("task_mix must not be empty");
  double total = 0.0;
  for (const auto& t : task_mix) {
    if (!(t.weight >= 0)) fail("task weights must be >= 0");
    if (t.n_picks_min < 1 || t.n_picks_max < t.n_picks_min) fail("invalid n_picks range");
    total += t.weight;
    template_instruction(t.instruction_template_id, t.n_picks_min);
  }
  if (!(total > 0)) fail("task weights must have a positive sum");
  if (n_bins < 1) fail("n_bins must be >= 1");
  if (!hand.valid()) fail("invalid hand dimensions");
  grounding.validate();
  motion.validate();
  keyframes.validate();
  appearance.validate();
  if (motion.min_step_px > 0 && !(motion.min_step_px > keyframes.eps_v))
    fail("motion.min_step_px must exceed keyframes.eps_v so moving frames never read as stagnant");
}

json RunConfig::content_json() const {
  json mix = json::array();
  for (const auto& t : task_mix)
    mix.push_back({{"task_type", t.task_type},
                   {"weight", t.weight},
                   {"n_picks", {t.n_picks_min, t.n_picks_max}},
                   {"pick_labels", t.pick_labels},
                   {"place_labels", t.place_labels},
                   {"instruction_template_id", t.instruction_template_id}});
  return {{"num_samples", num_samples},
          {"global_seed", global_seed},
          {"task_mix", mix},
          {"grounding",
           {{"jitter_frac", grounding.jitter_frac},
            {"enable_jitter", grounding.enable_jitter},
            {"max_retries", grounding.max_retries},
            {"depth_half_window", grounding.depth_half_window}}},
          {"motion", to_json(motion)},
          {"keyframes", {{"eps_v", keyframes.eps_v}, {"min_run", keyframes.min_run}}},
          {"appearance",
           {{"enable", appearance.enable},
            {"albedo", vec_json(appearance.base_albedo)},
            {"albedo_jitter", appearance.albedo_jitter},
            {"scale_jitter", appearance.scale_jitter},
            {"light_dir", vec_json(appearance.base_light_dir)},
            {"light_cone", appearance.light_cone},
            {"ambient", appearance.ambient}}},
          {"hand", {{"tip", hand.tip}, {"pip", hand.pip}, {"mcp", hand.mcp}, {"wrist", hand.wrist}}},
          {"n_bins", n_bins},
          {"write_masks", write_masks}};
}

std::string RunConfig::content_hash() const {
  return hex64(StableHash().add(canonical_dump(content_json())).digest());
}

RunConfig run_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  RunConfig c;
  try {
    auto path_of = [&](const char* key) {
      std::filesystem::path p = j.at(key).get<std::string>();
      return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    };
    if (j.contains("scenes_dir")) c.scenes_dir = path_of("scenes_dir");
    if (j.contains("out_dir")) c.out_dir = path_of("out_dir");
    c.num_samples = j.value("num_samples", c.num_samples);
    c.global_seed = j.value("global_seed", c.global_seed);
    c.workers = j.value("workers", c.workers);
    c.n_bins = j.value("n_bins", c.n_bins);
    c.write_masks = j.value("write_masks", c.write_masks);

    if (j.contains("task_mix")) {
      c.task_mix.clear();
      for (const json& t : j.at("task_mix")) {
        TaskSpec s;
        s.task_type = t.value("task_type", s.task_type);
        s.weight = t.value("weight", s.weight);
        if (t.contains("n_picks")) {
          s.n_picks_min = t.at("n_picks").at(0).get<int>();
          s.n_picks_max = t.at("n_picks").at(1).get<int>();
        }
        s.pick_labels = t.value("pick_labels", s.pick_labels);
        s.place_labels = t.value("place_labels", s.place_labels);
        s.instruction_template_id = t.value("instruction_template_id", s.task_type);
        c.task_mix.push_back(s);
      }
    }
    if (j.contains("grounding")) {
      const json& g = j.at("grounding");
      c.grounding.jitter_frac = g.value("jitter_frac", c.grounding.jitter_frac);
      c.grounding.enable_jitter = g.value("enable_jitter", c.grounding.enable_jitter);
      c.grounding.max_retries = g.value("max_retries", c.grounding.max_retries);
      c.grounding.depth_half_window = g.value("depth_half_window", c.grounding.depth_half_window);
    }
    if (j.contains("motion")) c.motion = motion_from_json(j.at("motion"), c.motion);
    if (j.contains("keyframes")) {
      c.keyframes.eps_v = j.at("keyframes").value("eps_v", c.keyframes.eps_v);
      c.keyframes.min_run = j.at("keyframes").value("min_run", c.keyframes.min_run);
    }
    if (j.contains("appearance")) {
      const json& a = j.at("appearance");
      c.appearance.enable = a.value("enable", c.appearance.enable);
      if (a.contains("albedo")) c.appearance.base_albedo = vec3_from(a.at("albedo"));
      c.appearance.albedo_jitter = a.value("albedo_jitter", c.appearance.albedo_jitter);
      c.appearance.scale_jitter = a.value("scale_jitter", c.appearance.scale_jitter);
      if (a.contains("light_dir")) c.appearance.base_light_dir = vec3_from(a.at("light_dir")).normalized();
      c.appearance.light_cone = a.value("light_cone", c.appearance.light_cone);
      c.appearance.ambient = a.value("ambient", c.appearance.ambient);
    }
    if (j.contains("hand")) {
      const json& h = j.at("hand");
      c.hand.tip = h.value("tip", c.hand.tip);
      c.hand.pip = h.value("pip", c.hand.pip);
      c.hand.mcp = h.value("mcp", c.hand.mcp);
      c.hand.wrist = h.value("wrist", c.hand.wrist);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("run config: ") + e.what());
  }
  c.grounding.n_bins = c.n_bins;
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return run_config_from_json(read_json_file(path), path.parent_path());
}

std::uint64_t sample_seed(std::uint64_t global_seed, const std::string& scene_id, std::uint64_t index) {
  return StableHash().add_u64(global_seed).add(scene_id).add_u64(index).digest();
}

std::string sample_id_for(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "s%06d", index);
  return buf;
}

GenerateSummary generate_dataset(const RunConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::vector<SceneObservation> scenes = load_scenes(cfg.scenes_dir);
  if (scenes.empty()) throw Error(ErrorCode::IoError, "no scenes found in " + cfg.scenes_dir.string());

  std::filesystem::create_directories(cfg.out_dir);
  std::filesystem::remove_all(cfg.out_dir / "samples");
  std::filesystem::remove(cfg.out_dir / "manifest.jsonl");

  ManifestHeader header;
  header.global_seed = cfg.global_seed;
  header.config_hash = cfg.content_hash();
  header.n_bins = cfg.n_bins;
  header.scenes_dir = std::filesystem::absolute(cfg.scenes_dir).lexically_normal().string();

  const HandMesh mesh = build_proxy_hand(cfg.hand);
  const SampleContext ctx{cfg, mesh, header};

  std::vector<std::optional<Sample>> results(cfg.num_samples);
  std::vector<std::optional<SkippedSample>> skips(cfg.num_samples);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < cfg.num_samples; i = next.fetch_add(1)) {
      const SceneObservation& scene = scenes[static_cast<std::size_t>(i) % scenes.size()];
      try {
        results[i] = generate_one(ctx, scene, i);
      } catch (const Error& e) {
        skips[i] = SkippedSample{i, scene.scene_id, e.code(), e.what()};
      } catch (const std::exception& e) {
        skips[i] = SkippedSample{i, scene.scene_id, ErrorCode::IoError, e.what()};
      }
      if (skips[i]) {
        std::error_code ec;
        std::filesystem::remove_all(cfg.out_dir / "samples" / sample_id_for(i), ec);
      }
    }
  };
  const int n_workers = std::min(cfg.workers, cfg.num_samples);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  GenerateSummary summary;
  summary.requested = cfg.num_samples;
  std::vector<Sample> samples;
  for (int i = 0; i < cfg.num_samples; ++i) {
    if (results[i]) samples.push_back(std::move(*results[i]));
    if (skips[i]) summary.skipped.push_back(*skips[i]);
  }
  summary.written = static_cast<int>(samples.size());
  header.num_samples = summary.written;
  header.num_skipped = static_cast<int>(summary.skipped.size());
  summary.manifest_path = write_manifest(samples, header, cfg.out_dir);
  summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  summary.samples_per_second = summary.wall_seconds > 0 ? summary.written / summary.wall_seconds : 0.0;
  return summary;
}

DecodeSummary decode_dataset(const std::filesystem::path& dataset_dir, const OracleConfig& cfg,
                             const std::optional<std::filesystem::path>& scenes_dir) {
  const Manifest manifest = read_manifest(dataset_dir / "manifest.jsonl");
  SceneCache scenes(resolve_scenes_dir(manifest, scenes_dir));

  DecodeSummary summary;
  json samples = json::array();
  for (const Sample& s : manifest.samples) {
    SamplePrediction pred;
    pred.sample_id = s.sample_id;
    std::vector<std::optional<ErrorCode>> errors;
    std::vector<std::optional<ResolveResult>> results;

    if (s.keyframes.empty()) {
      results.assign(s.supervision.size(), std::nullopt);
      errors.assign(s.supervision.size(), ErrorCode::InconsistentSample);
    } else {
      std::vector<KeypointFrame> kfs;
      for (const auto& k : s.keyframes) kfs.push_back(k.keypoints);
      try {
        for (const SequenceEntry& e : resolve_sequence(kfs, scenes.get(s.scene_id), cfg)) {
          results.push_back(e.result);
          errors.push_back(e.error);
        }
      } catch (const Error& e) {
        results.assign(kfs.size(), std::nullopt);
        errors.assign(kfs.size(), e.code());
      }
    }

    json per_target = json::array();
    for (std::size_t k = 0; k < results.size(); ++k) {
      json entry = {{"order", k}};
      if (results[k]) {
        pred.predicted.push_back(results[k]->candidate_index);
        pred.distance.push_back(results[k]->min_distance);
        entry["predicted"] = results[k]->candidate_index;
        entry["distance"] = results[k]->min_distance;
        entry["ray_param"] = results[k]->ray_param;
        entry["status"] = "ok";
      } else {
        pred.predicted.push_back(std::nullopt);
        pred.distance.push_back(std::nullopt);
        entry["predicted"] = nullptr;
        entry["distance"] = nullptr;
        entry["ray_param"] = nullptr;
        entry["status"] = std::string(to_string(errors[k].value_or(ErrorCode::NoResolvableCandidate)));
        ++summary.unresolved_targets;
      }
      per_target.push_back(entry);
    }
    samples.push_back({{"sample_id", s.sample_id}, {"per_target", per_target}});
    summary.predictions.push_back(std::move(pred));
    summary.errors.push_back(std::move(errors));
  }

  const json doc = {{"oracle", {{"stride", cfg.stride}, {"t_min", cfg.t_min}}}, {"samples", samples}};
  summary.predictions_path = dataset_dir / "predictions.json";
  write_text(summary.predictions_path, canonical_dump(doc) + "\n");
  return summary;
}

std::vector<SamplePrediction> read_predictions(const std::filesystem::path& path) {
  const json doc = read_json_file(path);
  std::vector<SamplePrediction> out;
  try {
    for (const json& s : doc.at("samples")) {
      SamplePrediction p;
      p.sample_id = s.at("sample_id").get<std::string>();
      for (const json& t : s.at("per_target")) {
        const json& pred = t.at("predicted");
        p.predicted.push_back(pred.is_null() ? std::nullopt : std::optional<int>(pred.get<int>()));
        const json& dist = t.value("distance", json(nullptr));
        p.distance.push_back(dist.is_null() ? std::nullopt : std::optional<double>(dist.get<double>()));
      }
      out.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return out;
}

json to_json(const EvalReport& report) {
  json per_sample = json::array();
  for (const auto& s : report.per_sample) {
    json targets = json::array();
    for (const auto& t : s.per_target)
      targets.push_back({{"expected", t.expected},
                         {"predicted", t.predicted ? json(*t.predicted) : json(nullptr)},
                         {"distance", t.distance ? json(*t.distance) : json(nullptr)}});
    per_sample.push_back({{"sample_id", s.sample_id}, {"per_target", targets}});
  }
  return {{"n_samples", report.n_samples},
          {"accuracy", report.accuracy},
          {"progress_score", report.progress_score},
          {"per_sample", per_sample}};
}

EvalReport evaluate_dataset(const std::filesystem::path& dataset_dir, const std::filesystem::path& predictions_path) {
  const Manifest manifest = read_manifest(dataset_dir / "manifest.jsonl");
  const std::vector<SamplePrediction> preds = read_predictions(predictions_path);

  std::map<std::string, const SamplePrediction*> by_id;
  for (const auto& p : preds) {
    if (!by_id.emplace(p.sample_id, &p).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate prediction for sample '" + p.sample_id + "'");
  }
  std::vector<SamplePrediction> aligned;
  std::vector<SampleSupervision> supervision;
  for (const Sample& s : manifest.samples) {
    const auto it = by_id.find(s.sample_id);
    if (it == by_id.end()) throw Error(ErrorCode::InvalidArgument, "no prediction for sample '" + s.sample_id + "'");
    aligned.push_back(*it->second);
    by_id.erase(it);
    SampleSupervision sup{s.sample_id, {}};
    for (const auto& t : s.supervision) sup.expected.push_back(t.candidate_index);
    supervision.push_back(std::move(sup));
  }
  if (!by_id.empty())
    throw Error(ErrorCode::InvalidArgument, "prediction for unknown sample '" + by_id.begin()->first + "'");

  const EvalReport report = evaluate(aligned, supervision);
  write_text(dataset_dir / "eval_report.json", canonical_dump(to_json(report)) + "\n");
  return report;
}

InspectResult inspect_sample(const std::filesystem::path& dataset_dir, const std::string& sample_id, bool overlay,
                             const std::optional<std::filesystem::path>& scenes_dir) {
  const Manifest manifest = read_manifest(dataset_dir / "manifest.jsonl");
  const Sample* found = nullptr;
  for (const auto& s : manifest.samples)
    if (s.sample_id == sample_id) found = &s;
  if (!found) throw Error(ErrorCode::UnknownSample, "no sample '" + sample_id + "' in " + dataset_dir.string());
  const Sample& s = *found;

  std::ostringstream out;
  out << "sample      " << s.sample_id << "\n"
      << "scene       " << s.scene_id << "\n"
      << "task_type   " << s.task_type << "\n"
      << "instruction " << s.instruction << "\n"
      << "frames      " << s.num_frames << " (" << s.image_width << "x" << s.image_height << ") in " << s.frames_dir
      << "\n"
      << "seed        " << s.meta.seed << "\n"
      << "targets:\n";
  for (const auto& t : s.supervision) {
    out << "  [" << t.order << "] " << to_string(t.role) << " candidate " << t.candidate_index << " (" << t.label
        << ") px (" << t.point_px.x() << ", " << t.point_px.y() << ") 3d (" << t.point_3d.x() << ", "
        << t.point_3d.y() << ", " << t.point_3d.z() << ") tokens <" << t.loc_tokens[0] << ", " << t.loc_tokens[1]
        << ">\n";
  }
  out << "keyframes:\n";
  for (std::size_t k = 0; k < s.keyframes.size(); ++k) {
    const auto& kf = s.keyframes[k];
    out << "  frame " << kf.frame;
    if (k < s.meta.holds.size())
      out << " (hold " << s.meta.holds[k].start_frame << "-" << s.meta.holds[k].end_frame << ")";
    out << "\n    feature";
    for (int i = 0; i < kf.feature.size(); ++i) out << " " << kf.feature(i);
    out << "\n";
  }

  InspectResult result;
  if (overlay) {
    SceneCache scenes(resolve_scenes_dir(manifest, scenes_dir));
    const Intrinsics& K = scenes.get(s.scene_id).intrinsics;
    const std::filesystem::path src = dataset_dir / s.frames_dir;
    const std::filesystem::path dst = dataset_dir / "samples" / s.sample_id / "overlay";
    std::filesystem::create_directories(dst);
    static constexpr std::uint8_t kTarget[3] = {40, 230, 60};
    static constexpr std::uint8_t kRay[3] = {240, 30, 30};
    for (int f = 0; f < s.num_frames; ++f) {
      RgbImage img = read_png_rgb(src / frame_filename(f));
      for (const auto& t : s.supervision) draw_cross(img, t.point_px.x(), t.point_px.y(), 5, kTarget);
      for (const auto& kf : s.keyframes) {
        if (kf.frame != f) continue;
        try {
          const PointingRay ray = pointing_ray(kf.keypoints, K);
          Pixel prev = project(K, ray.origin);
          for (double t = 0.02; t <= 1.0; t += 0.02) {
            const Point3 p = ray.origin + t * ray.dir;
            if (!(p.z() > 0.01)) break;
            const Pixel cur = project(K, p);
            draw_line(img, prev, cur, kRay);
            prev = cur;
          }
        } catch (const Error&) {
          // Degenerate keyframes are drawn without a ray.
        }
      }
      write_png_rgb(dst / frame_filename(f), img, 1);
      ++result.overlay_frames;
    }
  }
  result.text = out.str();
  return result;
}

}  // namespace gesture
