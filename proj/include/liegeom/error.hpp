#pragma once

#include <stdexcept>
#include <string>

namespace liegeom {

// Failure modes surfaced by the kernel. The CLI maps a subset of these to
// dedicated exit codes.
enum class ErrorCode {
  DimensionMismatch,
  GroupMismatch,
  NotNormal,
  NoConvergence,
  CutLocus,
  NotRankOne,
  NotInGroup,
  NotTangent,
  TooFar,
  DegeneratePlane,
  InadmissibleParameters,
  Unclassified,
  NotWellDefined,
  InvalidArgument,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::GroupMismatch: return "GroupMismatch";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::CutLocus: return "CutLocus";
    case ErrorCode::NotRankOne: return "NotRankOne";
    case ErrorCode::NotInGroup: return "NotInGroup";
    case ErrorCode::NotTangent: return "NotTangent";
    case ErrorCode::TooFar: return "TooFar";
    case ErrorCode::DegeneratePlane: return "DegeneratePlane";
    case ErrorCode::InadmissibleParameters: return "InadmissibleParameters";
    case ErrorCode::Unclassified: return "Unclassified";
    case ErrorCode::NotWellDefined: return "NotWellDefined";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace liegeom
