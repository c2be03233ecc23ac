#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace starspec {

enum class ErrorCode {
  InvalidInput,
  Confinement,
  AngleOrdering,
  IndexOutOfRange,
  DomainError,
  NotSymmetric,
  ZeroStrength,
  NotAnEigenvalue,
  DimensionMismatch,
  NonRealTrace,
  SolverDiverged,
  OddCount,
  BoundViolation,
  NotUnitary,
  PhaseResolution,
  MatchingResidual,
  NoZeroMode,
};

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::Confinement: return "Confinement";
    case ErrorCode::AngleOrdering: return "AngleOrdering";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::ZeroStrength: return "ZeroStrength";
    case ErrorCode::NotAnEigenvalue: return "NotAnEigenvalue";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonRealTrace: return "NonRealTrace";
    case ErrorCode::SolverDiverged: return "SolverDiverged";
    case ErrorCode::OddCount: return "OddCount";
    case ErrorCode::BoundViolation: return "BoundViolation";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::PhaseResolution: return "PhaseResolution";
    case ErrorCode::MatchingResidual: return "MatchingResidual";
    case ErrorCode::NoZeroMode: return "NoZeroMode";
  }
  return "Unknown";
}

// Errors caused by what the caller passed in, as opposed to numerical
// breakdown inside an algorithm.
inline bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput:
    case ErrorCode::Confinement:
    case ErrorCode::AngleOrdering:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::DomainError:
    case ErrorCode::NotSymmetric:
    case ErrorCode::ZeroStrength:
    case ErrorCode::NotAnEigenvalue:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NoZeroMode:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace starspec
