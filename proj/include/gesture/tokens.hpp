#pragma once

#include <algorithm>
#include <cmath>

#include "gesture/error.hpp"

namespace gesture {

inline constexpr int kDefaultBins = 1024;

/// Bin index of a normalized coordinate: clamp(floor(x * n_bins), 0, n_bins - 1).
inline int discretize_coord(double x_norm, int n_bins = kDefaultBins) {
  if (n_bins < 1) throw Error(ErrorCode::InvalidArgument, "n_bins must be >= 1");
  if (!std::isfinite(x_norm)) throw Error(ErrorCode::NonFinite, "cannot discretize a non-finite coordinate");
  const double scaled = std::floor(x_norm * n_bins);
  return static_cast<int>(std::clamp(scaled, 0.0, static_cast<double>(n_bins - 1)));
}

/// Bin center.
inline double undiscretize_coord(int bin, int n_bins = kDefaultBins) {
  if (n_bins < 1) throw Error(ErrorCode::InvalidArgument, "n_bins must be >= 1");
  return (bin + 0.5) / n_bins;
}

}  // namespace gesture
