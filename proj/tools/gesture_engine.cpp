// Command-line entry point: generate, decode, eval, validate, inspect.
// Exit codes: 0 success, 1 fatal error, 2 validation failures.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gesture/attention.hpp"
#include "gesture/fixtures.hpp"
#include "gesture/pipeline.hpp"

namespace {

constexpr int kFatal = 1;
constexpr int kInvalid = 2;

int run_generate(const std::string& config_path, std::optional<std::uint64_t> seed, std::optional<int> workers,
                 bool masks) {
  gesture::RunConfig cfg = gesture::load_run_config(config_path);
  if (seed) cfg.global_seed = *seed;
  if (workers) cfg.workers = *workers;
  if (masks) cfg.write_masks = true;
  const gesture::GenerateSummary s = gesture::generate_dataset(cfg);
  std::printf("requested %d  written %d  skipped %zu\n", s.requested, s.written, s.skipped.size());
  for (const auto& k : s.skipped)
    std::printf("  skipped %s (scene %s): %s  %s\n", gesture::sample_id_for(k.index).c_str(), k.scene_id.c_str(),
                gesture::to_string(k.reason).data(), k.message.c_str());
  std::printf("wall %.2f s  %.2f samples/s\nmanifest %s\n", s.wall_seconds, s.samples_per_second,
              s.manifest_path.string().c_str());
  return 0;
}

int run_decode(const std::string& dataset, const gesture::OracleConfig& oc, const std::string& scenes) {
  std::optional<std::filesystem::path> scenes_dir;
  if (!scenes.empty()) scenes_dir = scenes;
  const gesture::DecodeSummary s = gesture::decode_dataset(dataset, oc, scenes_dir);
  std::printf("decoded %zu samples, %d unresolved targets\npredictions %s\n", s.predictions.size(),
              s.unresolved_targets, s.predictions_path.string().c_str());
  return 0;
}

int run_eval(const std::string& dataset, const std::string& pred) {
  const gesture::EvalReport r = gesture::evaluate_dataset(dataset, pred);
  std::printf("samples %d  accuracy %.2f  progress %.2f\n", r.n_samples, r.accuracy, r.progress_score);
  return 0;
}

int run_validate(const std::string& dataset) {
  const gesture::DatasetValidation v = gesture::validate_dataset(dataset);
  for (const auto& p : v.manifest_problems) std::printf("manifest: %s\n", p.c_str());
  for (const auto& s : v.samples)
    for (const auto& p : s.problems) std::printf("%s: %s\n", s.sample_id.c_str(), p.c_str());
  std::printf("%zu samples, %d invalid\n", v.samples.size(), v.failed());
  return v.ok() ? 0 : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pointing-gesture dataset engine"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  bool masks = false;
  auto* gen = app.add_subcommand("generate", "Synthesize a dataset from a run config");
  gen->add_option("--config", config_path, "Run config JSON")->required()->check(CLI::ExistingFile);
  gen->add_option("--seed", seed, "Override global_seed");
  gen->add_option("--workers", workers, "Override worker count")->check(CLI::PositiveNumber);
  gen->add_flag("--masks", masks, "Also write hand masks");

  std::string dataset;
  gesture::OracleConfig oc;
  std::string scenes;
  auto* dec = app.add_subcommand("decode", "Resolve stored keyframes to candidates");
  dec->add_option("--dataset", dataset)->required();
  dec->add_option("--stride", oc.stride, "Point-cloud sampling stride")->check(CLI::PositiveNumber);
  dec->add_option("--t-min", oc.t_min, "Minimum ray parameter in meters");
  dec->add_option("--scenes", scenes, "Scene directory (defaults to the one recorded in the manifest)");

  std::string pred;
  auto* ev = app.add_subcommand("eval", "Score predictions against supervision");
  ev->add_option("--dataset", dataset)->required();
  ev->add_option("--pred", pred)->required();

  auto* val = app.add_subcommand("validate", "Check every sample invariant");
  val->add_option("--dataset", dataset)->required();

  std::string sample_id;
  bool overlay = false;
  auto* insp = app.add_subcommand("inspect", "Dump one sample, or an attention mask");
  insp->add_option("--dataset", dataset);
  insp->add_option("--sample", sample_id);
  insp->add_flag("--overlay", overlay, "Write frames with targets and keyframe rays drawn");
  insp->add_option("--scenes", scenes);
  std::string layout;
  auto* mask = insp->add_subcommand("mask", "Print the attention mask for a segment layout");
  mask->add_option("--layout", layout, "len_int,int_prefix,len_per,len_act")->required();
  bool act_to_int = false;
  mask->add_flag("--act-to-int", act_to_int, "Let action rows attend to intent rows");

  std::string fx_out;
  int fx_count = 20;
  std::uint64_t fx_seed = 1;
  gesture::fixtures::TabletopConfig fx_cfg;
  auto* fx = app.add_subcommand("fixtures", "Write ray-cast tabletop test scenes");
  fx->add_option("--out", fx_out)->required();
  fx->add_option("--count", fx_count)->check(CLI::PositiveNumber);
  fx->add_option("--seed", fx_seed);
  fx->add_option("--width", fx_cfg.width);
  fx->add_option("--height", fx_cfg.height);
  fx->add_option("--focal", fx_cfg.focal);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return run_generate(config_path, seed, workers, masks);
    if (*dec) return run_decode(dataset, oc, scenes);
    if (*ev) return run_eval(dataset, pred);
    if (*val) return run_validate(dataset);
    if (*mask) {
      gesture::SegmentLayout l = gesture::parse_layout(layout);
      l.allow_act_to_int = act_to_int;
      std::cout << gesture::format_mask(gesture::build_attention_mask(l));
      return 0;
    }
    if (*insp) {
      if (dataset.empty() || sample_id.empty()) {
        std::cerr << "inspect needs --dataset and --sample (or the mask subcommand)\n";
        return kFatal;
      }
      std::optional<std::filesystem::path> scenes_dir;
      if (!scenes.empty()) scenes_dir = scenes;
      const gesture::InspectResult r = gesture::inspect_sample(dataset, sample_id, overlay, scenes_dir);
      std::cout << r.text;
      if (overlay) std::cout << "overlay frames " << r.overlay_frames << "\n";
      return 0;
    }
    if (*fx) {
      for (const auto& p : gesture::fixtures::write_tabletop_scenes(fx_out, fx_count, fx_seed, fx_cfg))
        std::cout << p.string() << "\n";
      return 0;
    }
  } catch (const gesture::Error& e) {
    std::cerr << "error [" << gesture::to_string(e.code()) << "]: " << e.what() << "\n";
    return kFatal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFatal;
  }
  return kFatal;
}
