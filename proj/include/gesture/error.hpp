#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gesture {

/// Machine-readable failure kinds. Generation skip reasons are reported with
/// these names, so keep to_string() in sync when adding entries.
enum class ErrorCode {
  NonPositiveDepth,
  NoValidDepth,
  UngroundableTarget,
  InsufficientCandidates,
  NoFeasibleDirection,
  DegenerateUp,
  DegenerateRay,
  NoResolvableCandidate,
  EmptyDataset,
  UnknownTaskType,
  InconsistentSample,
  InvalidSchedule,
  NonFinite,
  UnknownSample,
  InvalidArgument,
  ParseError,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::NoValidDepth: return "NoValidDepth";
    case ErrorCode::UngroundableTarget: return "UngroundableTarget";
    case ErrorCode::InsufficientCandidates: return "InsufficientCandidates";
    case ErrorCode::NoFeasibleDirection: return "NoFeasibleDirection";
    case ErrorCode::DegenerateUp: return "DegenerateUp";
    case ErrorCode::DegenerateRay: return "DegenerateRay";
    case ErrorCode::NoResolvableCandidate: return "NoResolvableCandidate";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::UnknownTaskType: return "UnknownTaskType";
    case ErrorCode::InconsistentSample: return "InconsistentSample";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::UnknownSample: return "UnknownSample";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gesture
