#pragma once

#include <string>
#include <tuple>

#include <Eigen/Core>

namespace gesture {

/// Token segments in sequence order: intent, perception, action.
struct SegmentLayout {
  int len_int = 0;
  int int_prefix = 0;  ///< bidirectional prompt prefix inside the intent segment
  int len_per = 0;
  int len_act = 0;
  bool allow_act_to_int = false;

  int total() const { return len_int + len_per + len_act; }
  void validate() const;
};

/// Entry (r, c) true means token r may attend to token c.
using AttentionMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Intent rows see only intent columns (bidirectional prefix, causal suffix);
/// perception rows see intent and perception; action rows see perception and
/// action, plus intent when allow_act_to_int is set.
AttentionMask build_attention_mask(const SegmentLayout& layout);

struct InferenceCost {
  long long intent = 0;
  long long perception = 0;
  long long action = 0;
  bool operator==(const InferenceCost&) const = default;
};

/// Forward-pass counts for T control steps with N denoising iterations each:
/// intent runs once, perception once per step, the action expert N times per step.
InferenceCost inference_cost(int control_steps, int denoise_steps);

/// Parses "a,b,c,d" as len_int, int_prefix, len_per, len_act.
SegmentLayout parse_layout(const std::string& text);

/// One line per row, '1'/'0' per column.
std::string format_mask(const AttentionMask& mask);

}  // namespace gesture
