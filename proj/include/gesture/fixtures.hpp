#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gesture/scene.hpp"

namespace gesture::fixtures {

/// Ray-cast tabletop scenes (blocks and plates on a wooden table) with exact
/// depth, tight visible-pixel boxes, millimeter quantization and sparse
/// depth dropouts. They stand in for captured RGB-D scenes in tests.
struct TabletopConfig {
  int width = 640;
  int height = 480;
  double focal = 525.0;
  int min_blocks = 3;
  int max_blocks = 5;
  int min_plates = 1;
  int max_plates = 3;
  double dropout = 0.002;   ///< fraction of pixels with invalid depth
  int edge_margin_px = 24;  ///< candidate boxes stay this far from the border
  int min_box_gap_px = 8;
  /// Scale of the object placement region and minimum clearance; the small
  /// brute-force scenes shrink it.
  double spread = 1.0;
};

SceneObservation make_tabletop_scene(std::uint64_t seed, const std::string& scene_id,
                                     const TabletopConfig& cfg = {});

/// Writes count scenes as scene_000 ... under dir; returns their paths.
std::vector<std::filesystem::path> write_tabletop_scenes(const std::filesystem::path& dir, int count,
                                                         std::uint64_t seed, const TabletopConfig& cfg = {});

}  // namespace gesture::fixtures
