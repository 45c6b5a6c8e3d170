#include "gesture/attention.hpp"

#include <sstream>
#include <vector>

#include "gesture/error.hpp"

namespace gesture {

void SegmentLayout::validate() const {
  if (len_int < 0 || len_per < 0 || len_act < 0 || int_prefix < 0 || int_prefix > len_int)
    throw Error(ErrorCode::InvalidArgument, "invalid segment layout");
}

AttentionMask build_attention_mask(const SegmentLayout& layout) {
  layout.validate();
  const int n = layout.total();
  const int per0 = layout.len_int;
  const int act0 = per0 + layout.len_per;
  AttentionMask mask = AttentionMask::Constant(n, n, false);

  for (int r = 0; r < layout.len_int; ++r) {
    if (r < layout.int_prefix) {
      mask.row(r).head(layout.int_prefix).setConstant(true);
    } else {
      mask.row(r).head(r + 1).setConstant(true);
    }
  }
  for (int r = per0; r < act0; ++r) mask.row(r).head(act0).setConstant(true);
  for (int r = act0; r < n; ++r) {
    mask.row(r).segment(per0, n - per0).setConstant(true);
    if (layout.allow_act_to_int) mask.row(r).head(per0).setConstant(true);
  }
  return mask;
}

InferenceCost inference_cost(int control_steps, int denoise_steps) {
  if (control_steps < 1 || denoise_steps < 1)
    throw Error(ErrorCode::InvalidSchedule, "control and denoising steps must both be >= 1");
  return {1, control_steps, static_cast<long long>(control_steps) * denoise_steps};
}

SegmentLayout parse_layout(const std::string& text) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "layout entries must be integers: '" + text + "'");
    }
  }
  if (parts.size() != 4) throw Error(ErrorCode::ParseError, "layout needs 4 entries: len_int,prefix,len_per,len_act");
  SegmentLayout layout{parts[0], parts[1], parts[2], parts[3], false};
  layout.validate();
  return layout;
}

std::string format_mask(const AttentionMask& mask) {
  std::string out;
  out.reserve(static_cast<std::size_t>(mask.rows()) * (mask.cols() + 1));
  for (Eigen::Index r = 0; r < mask.rows(); ++r) {
    for (Eigen::Index c = 0; c < mask.cols(); ++c) out.push_back(mask(r, c) ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

}  // namespace gesture
