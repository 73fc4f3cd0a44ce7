#include "fivept/errors.hpp"

#include <utility>

namespace fivept {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAngleNearPi: return "AngleNearPi";
    case ErrorCode::kDegenerateDelta: return "DegenerateDelta";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kDegenerateObservation: return "DegenerateObservation";
    case ErrorCode::kDegreeOverflow: return "DegreeOverflow";
    case ErrorCode::kInexactDivision: return "InexactDivision";
    case ErrorCode::kRankDeficientB: return "RankDeficientB";
    case ErrorCode::kUnexpectedPivotPattern: return "UnexpectedPivotPattern";
    case ErrorCode::kSymmetryViolation: return "SymmetryViolation";
    case ErrorCode::kDegenerateZeroPolynomial: return "DegenerateZeroPolynomial";
    case ErrorCode::kFullRankC: return "FullRankC";
    case ErrorCode::kRescaleFailure: return "RescaleFailure";
    case ErrorCode::kRankBelow2: return "RankBelow2";
    case ErrorCode::kInvalidInterval: return "InvalidInterval";
    case ErrorCode::kSamplingExhausted: return "SamplingExhausted";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kMalformedInput: return "MalformedInput";
  }
  return "UnknownError";
}

SolverError::SolverError(ErrorCode code, const std::string& message, std::string stage)
    : std::runtime_error(stage.empty()
                             ? std::string(to_string(code)) + ": " + message
                             : std::string(to_string(code)) + " [" + stage + "]: " + message),
      code_(code),
      stage_(std::move(stage)) {}

}  // namespace fivept
