#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gesture/features.hpp"
#include "gesture/grounding.hpp"
#include "gesture/motion.hpp"
#include "gesture/render.hpp"

namespace gesture {

inline constexpr const char* kGeneratorVersion = "gesture-engine/0.1.0";

std::string template_instruction(int task_type, int n_picks);

struct KeyframeRecord {
  int frame = 0;
  KeypointFrame keypoints;
  GestureFeature feature = GestureFeature::Zero();
};

struct SampleMeta {
  std::uint64_t seed = 0;
  MotionConfig motion;
  AppearanceParams appearance;
  bool enable_jitter = true;
  double jitter_frac = 0.2;
  std::vector<Hold> holds;
  std::string generator_version = kGeneratorVersion;
};

struct Sample {
  std::string sample_id;
  std::string scene_id;
  int task_type = 0;
  std::string instruction;
  std::string frames_dir;  ///< relative to the dataset root
  int num_frames = 0;
  int image_width = 0;
  int image_height = 0;
  std::vector<KeyframeRecord> keyframes;
  std::vector<GroundedTarget> supervision;
  SampleMeta meta;
};

struct ManifestHeader {
  std::uint64_t global_seed = 0;
  std::string config_hash;
  int num_samples = 0;
  int num_skipped = 0;
  int n_bins = kDefaultBins;
  std::string scenes_dir;
  std::string generator_version = kGeneratorVersion;
};

/// A manifest file may hold several segments (header line followed by its
/// samples), which is what concatenating two manifests produces.
struct Manifest {
  std::vector<ManifestHeader> headers;
  std::vector<Sample> samples;
};

nlohmann::json to_json(const Sample& s);
Sample sample_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ManifestHeader& h);
ManifestHeader header_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MotionConfig& m);
MotionConfig motion_from_json(const nlohmann::json& j, MotionConfig base = {});

/// Compact JSON with sorted keys and doubles printed with 9 significant digits.
std::string canonical_dump(const nlohmann::json& j);

std::string frame_filename(int index);

struct AssembleInputs {
  std::filesystem::path dataset_root;
  std::string sample_id;
  const SceneObservation* scene = nullptr;
  const TaskPlan* plan = nullptr;
  const GestureTrajectory* trajectory = nullptr;
  const std::vector<KeypointFrame>* keypoints = nullptr;  ///< one per frame
  std::vector<int> keyframes;
  std::vector<GestureFeature> features;  ///< one per keyframe
  std::string instruction;
  SampleMeta meta;
  int n_bins = kDefaultBins;
};

/// Cross-checks the parts of one generation run; throws InconsistentSample
/// naming the failed invariant.
Sample assemble_sample(const AssembleInputs& in);

/// Problems with a sample record and its files; empty when it is valid.
std::vector<std::string> check_sample(const Sample& s, const std::filesystem::path& dataset_root, int n_bins,
                                      bool check_files = true);

std::filesystem::path write_manifest(const std::vector<Sample>& samples, const ManifestHeader& header,
                                     const std::filesystem::path& out_dir);
Manifest read_manifest(const std::filesystem::path& path);

struct SampleValidation {
  std::string sample_id;
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

struct DatasetValidation {
  std::vector<std::string> manifest_problems;
  std::vector<SampleValidation> samples;
  bool ok() const;
  int failed() const;
};

DatasetValidation validate_dataset(const std::filesystem::path& dir);

}  // namespace gesture
