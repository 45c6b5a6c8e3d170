#include <doctest.h>

#include <fstream>
#include <sstream>

#include "gesture/dataset.hpp"
#include "gesture/fixtures.hpp"
#include "gesture/pipeline.hpp"
#include "support.hpp"

using namespace gesture;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A small generated dataset shared by the tests in this file.
struct Generated {
  testing::TempDir dir{"dataset"};
  RunConfig cfg;
  Generated() {
    fixtures::TabletopConfig fx;
    fx.width = 320;
    fx.height = 240;
    fx.focal = 262.5;
    fx.edge_margin_px = 12;
    fixtures::write_tabletop_scenes(dir / "scenes", 3, 17, fx);
    cfg.scenes_dir = dir / "scenes";
    cfg.out_dir = dir / "out";
    cfg.num_samples = 6;
    cfg.global_seed = 99;
    cfg.task_mix = {TaskSpec{0, 1.0, 1, 1, {"block"}, {"plate"}, 0}, TaskSpec{1, 1.0, 2, 3, {"block"}, {"plate"}, 1}};
    const GenerateSummary s = generate_dataset(cfg);
    REQUIRE(s.written == 6);
  }
};

Generated& shared() {
  static Generated g;
  return g;
}

}  // namespace

TEST_CASE("template_instruction") {
  CHECK(template_instruction(0, 1) == "Pick this up and put it there.");
  CHECK(template_instruction(1, 3) == "Pick these up in order and put them there.");
  try {
    template_instruction(7, 1);
    FAIL("expected UnknownTaskType");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownTaskType);
  }
}

TEST_CASE("canonical_dump sorts keys and fixes float precision") {
  const nlohmann::json j = {{"b", 1.0 / 3.0}, {"a", {{"d", 1}, {"c", true}}}};
  CHECK(canonical_dump(j) == R"({"a":{"c":true,"d":1},"b":0.333333333})");
  CHECK(frame_filename(7) == "0007.png");
}

TEST_CASE("generated samples are well formed") {
  Generated& g = shared();
  const Manifest m = read_manifest(g.cfg.out_dir / "manifest.jsonl");
  REQUIRE(m.headers.size() == 1);
  CHECK(m.headers[0].num_samples == 6);
  CHECK(m.headers[0].global_seed == 99);
  REQUIRE(m.samples.size() == 6);
  for (const Sample& s : m.samples) {
    CHECK(s.keyframes.size() == s.supervision.size());
    CHECK(s.meta.holds.size() == s.supervision.size());
    CHECK(s.supervision.back().role == TargetRole::Place);
    CHECK(s.num_frames == 19 + 16 * static_cast<int>(s.supervision.size() - 1));
    CHECK(check_sample(s, g.cfg.out_dir, m.headers[0].n_bins).empty());
  }
  CHECK(validate_dataset(g.cfg.out_dir).ok());
}

TEST_CASE("manifest round trip") {
  Generated& g = shared();
  const Manifest m = read_manifest(g.cfg.out_dir / "manifest.jsonl");
  testing::TempDir tmp("manifest");
  write_manifest(m.samples, m.headers[0], tmp.path());
  CHECK(slurp(tmp / "manifest.jsonl") == slurp(g.cfg.out_dir / "manifest.jsonl"));

  const Manifest back = read_manifest(tmp / "manifest.jsonl");
  REQUIRE(back.samples.size() == m.samples.size());
  for (std::size_t i = 0; i < m.samples.size(); ++i) {
    CHECK(to_json(back.samples[i]) == to_json(m.samples[i]));
    CHECK(back.samples[i].meta.holds == m.samples[i].meta.holds);
    CHECK(back.samples[i].supervision[0].point_3d == m.samples[i].supervision[0].point_3d);
  }
}

TEST_CASE("concatenated manifests read as two segments") {
  Generated& g = shared();
  const std::string text = slurp(g.cfg.out_dir / "manifest.jsonl");
  testing::TempDir tmp("concat");
  std::ofstream(tmp / "m.jsonl", std::ios::binary) << text << text;
  const Manifest m = read_manifest(tmp / "m.jsonl");
  CHECK(m.headers.size() == 2);
  CHECK(m.samples.size() == 12);
}

TEST_CASE("truncated manifest line names its line number") {
  Generated& g = shared();
  std::string text = slurp(g.cfg.out_dir / "manifest.jsonl");
  // Cut the third line in half.
  std::size_t start = 0;
  for (int i = 0; i < 2; ++i) start = text.find('\n', start) + 1;
  const std::size_t end = text.find('\n', start);
  text = text.substr(0, start + (end - start) / 2) + text.substr(end);
  testing::TempDir tmp("trunc");
  std::ofstream(tmp / "m.jsonl", std::ios::binary) << text;
  try {
    read_manifest(tmp / "m.jsonl");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("validate_dataset catches injected faults") {
  Generated& g = shared();
  testing::TempDir tmp("faults");
  std::filesystem::copy(g.cfg.out_dir, tmp / "ds", std::filesystem::copy_options::recursive);
  const Manifest m = read_manifest(tmp / "ds" / "manifest.jsonl");

  SUBCASE("missing frame") {
    std::filesystem::remove(tmp / "ds" / m.samples[2].frames_dir / frame_filename(4));
    const DatasetValidation v = validate_dataset(tmp / "ds");
    CHECK(v.failed() == 1);
    for (const auto& s : v.samples) CHECK(s.ok() == (s.sample_id != m.samples[2].sample_id));
  }
  SUBCASE("keypoint depth zeroed") {
    std::vector<Sample> samples = m.samples;
    samples[1].keyframes[0].keypoints.keypoints[kTip].z() = 0.0;
    write_manifest(samples, m.headers[0], tmp / "ds");
    const DatasetValidation v = validate_dataset(tmp / "ds");
    CHECK(v.failed() == 1);
    for (const auto& s : v.samples) {
      if (s.sample_id != samples[1].sample_id) continue;
      REQUIRE(!s.ok());
      bool mentions_depth = false;
      for (const auto& p : s.problems) mentions_depth |= p.find("d > 0") != std::string::npos;
      CHECK(mentions_depth);
    }
  }
  SUBCASE("loc tokens that do not match the pixel") {
    std::vector<Sample> samples = m.samples;
    samples[0].supervision[0].loc_tokens[0] += 3;
    write_manifest(samples, m.headers[0], tmp / "ds");
    CHECK(validate_dataset(tmp / "ds").failed() == 1);
  }
}

TEST_CASE("assemble_sample rejects inconsistent parts") {
  const SceneObservation scene = fixtures::make_tabletop_scene(3, "asm");
  GroundingConfig gc;
  MotionConfig mc;
  Rng rng(1);
  const TaskPlan plan = sample_task_plan(scene, 0, 1, gc, rng);  // one pick, one place
  const GestureTrajectory traj = compose_trajectory(plan, scene.intrinsics, mc, rng);
  const auto kps = project_trajectory(traj, HandDims{}, scene.intrinsics);
  const auto kfs = select_keyframes(kps, KeyframeConfig{});
  REQUIRE(kfs.size() == 2);

  testing::TempDir tmp("asm");
  AssembleInputs in;
  in.dataset_root = tmp.path();
  in.sample_id = "s000000";
  in.scene = &scene;
  in.plan = &plan;
  in.trajectory = &traj;
  in.keypoints = &kps;
  in.keyframes = kfs;
  for (int f : kfs) in.features.push_back(encode_feature(kps[f], scene.width(), scene.height()));
  in.instruction = template_instruction(0, 1);

  auto expect_inconsistent = [&](const AssembleInputs& bad) {
    try {
      assemble_sample(bad);
      FAIL("expected InconsistentSample");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InconsistentSample);
    }
  };
  // No frames on disk yet.
  expect_inconsistent(in);

  const auto frames = tmp / "samples" / "s000000" / "frames";
  std::filesystem::create_directories(frames);
  for (std::size_t f = 0; f < traj.frames.size(); ++f)
    write_png_rgb(frames / frame_filename(static_cast<int>(f)), scene.rgb);
  const Sample s = assemble_sample(in);
  CHECK(s.keyframes.size() == 2);
  CHECK(s.supervision.size() == 2);

  AssembleInputs extra = in;
  extra.keyframes.push_back(kfs[1] + 1);
  extra.features.push_back(encode_feature(kps[kfs[1] + 1], scene.width(), scene.height()));
  expect_inconsistent(extra);
}
