#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gesture/dataset.hpp"
#include "gesture/error.hpp"
#include "gesture/features.hpp"
#include "gesture/grounding.hpp"
#include "gesture/motion.hpp"
#include "gesture/oracle.hpp"
#include "gesture/render.hpp"

namespace gesture {

struct TaskSpec {
  int task_type = 0;
  double weight = 1.0;
  int n_picks_min = 1;
  int n_picks_max = 1;
  std::vector<std::string> pick_labels{"block"};
  std::vector<std::string> place_labels{"plate"};
  int instruction_template_id = 0;
};

struct RunConfig {
  std::filesystem::path scenes_dir;
  std::filesystem::path out_dir;
  int num_samples = 1;
  std::uint64_t global_seed = 0;
  int workers = 1;
  std::vector<TaskSpec> task_mix{TaskSpec{}};
  GroundingConfig grounding;
  MotionConfig motion;
  KeyframeConfig keyframes;
  AppearanceConfig appearance;
  HandDims hand;
  int n_bins = kDefaultBins;
  bool write_masks = false;

  void validate() const;
  /// Everything that determines dataset content (paths and worker count excluded).
  nlohmann::json content_json() const;
  std::string content_hash() const;
};

/// Missing keys keep their defaults; relative paths resolve against base_dir.
RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

std::uint64_t sample_seed(std::uint64_t global_seed, const std::string& scene_id, std::uint64_t index);
std::string sample_id_for(int index);

struct SkippedSample {
  int index = 0;
  std::string scene_id;
  ErrorCode reason = ErrorCode::InvalidArgument;
  std::string message;
};

struct GenerateSummary {
  int requested = 0;
  int written = 0;
  std::vector<SkippedSample> skipped;
  double wall_seconds = 0.0;
  double samples_per_second = 0.0;
  std::filesystem::path manifest_path;
};

/// Full per-sample pipeline: plan, trajectory, render, keyframes, assemble.
/// Failures skip the sample; only unreadable scenes are fatal.
GenerateSummary generate_dataset(const RunConfig& cfg);

struct DecodeSummary {
  std::vector<SamplePrediction> predictions;
  std::vector<std::vector<std::optional<ErrorCode>>> errors;
  int unresolved_targets = 0;
  std::filesystem::path predictions_path;
};

/// Resolves every sample's stored keyframes against its scene and writes
/// predictions.json beside the manifest.
DecodeSummary decode_dataset(const std::filesystem::path& dataset_dir, const OracleConfig& cfg,
                             const std::optional<std::filesystem::path>& scenes_dir = std::nullopt);

std::vector<SamplePrediction> read_predictions(const std::filesystem::path& path);

/// Aligns predictions to the manifest by sample id, evaluates, and writes
/// eval_report.json into the dataset directory.
EvalReport evaluate_dataset(const std::filesystem::path& dataset_dir, const std::filesystem::path& predictions_path);

nlohmann::json to_json(const EvalReport& report);

/// Human-readable dump of one sample; with overlay, also writes annotated
/// frames into samples/<id>/overlay and reports how many.
struct InspectResult {
  std::string text;
  int overlay_frames = 0;
};

InspectResult inspect_sample(const std::filesystem::path& dataset_dir, const std::string& sample_id, bool overlay,
                             const std::optional<std::filesystem::path>& scenes_dir = std::nullopt);

}  // namespace gesture
