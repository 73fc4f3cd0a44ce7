#pragma once

#include <stdexcept>
#include <string>

namespace fivept {

/// Typed failure causes raised by the solver pipeline.
enum class ErrorCode {
  kAngleNearPi,              ///< rotation angle too close to pi for the rational map
  kDegenerateDelta,          ///< twisted-pair denominator vanishes
  kZeroVector,               ///< reflector requested for a (near-)zero vector
  kDegenerateObservation,    ///< bearing column with (near-)zero norm
  kDegreeOverflow,           ///< polynomial product exceeds the supported degree
  kInexactDivision,          ///< polynomial division left a non-negligible remainder
  kRankDeficientB,           ///< coefficient matrix lacks the five quartic pivots
  kUnexpectedPivotPattern,   ///< expanded-system elimination lost a required pivot
  kSymmetryViolation,        ///< degree-20 determinant is not palindromic
  kDegenerateZeroPolynomial, ///< polynomial vanished identically after trimming
  kFullRankC,                ///< 4x4 system has no nullspace at the given root
  kRescaleFailure,           ///< homogeneous solution cannot be rescaled (last entry ~ 0)
  kRankBelow2,               ///< translation system rank < 2, direction not unique
  kInvalidInterval,          ///< malformed root-filter interval
  kSamplingExhausted,        ///< scene sampling failed visibility checks too often
  kDegenerateInput,          ///< a pipeline stage failed; stage() names it
  kMalformedInput,           ///< input file violates the documented format
};

const char* to_string(ErrorCode code);

/**
 * Exception carrying a typed error code plus the pipeline stage that raised
 * it.  Per-root failures inside the solver are caught internally (the root is
 * dropped); failures of a whole stage propagate as kDegenerateInput with the
 * stage tag preserved.
 */
class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorCode code, const std::string& message, std::string stage = {});

  ErrorCode code() const noexcept { return code_; }
  /// Pipeline stage that raised the error ("normalize", "reduce", ...); may be empty.
  const std::string& stage() const noexcept { return stage_; }

 private:
  ErrorCode code_;
  std::string stage_;
};

}  // namespace fivept
