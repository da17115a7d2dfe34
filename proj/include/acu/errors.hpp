#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace acu {

enum class ErrorCode {
  InvalidInput,
  SingularInput,
  NotAlmostUnitary,
  NumericalFailure,
  BoundaryEigenvalue,
  DimensionCap,
  NotAlmostProjection,
  ProjectionsTooFar,
  NotAlmostOrthogonal,
  StageFailure,
  CommutatorTooLarge,
  CurveNearZero,
  PreconditionUnsatisfiable,
  ObstructionNonzero,
  RankMismatch,
  OracleDidNotConverge,
  OutOfAnnulus,
  NoSpectralGap,
  InvalidEpsilon,
  PathNotAdmissible,
  StagePreconditionFailed,
  ArcsTooClose,
  Undefined,
  SchemaViolation,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Carries the offending measured quantity when there is one (NaN otherwise).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        double measured = std::numeric_limits<double>::quiet_NaN(),
        std::string stage = {});

  ErrorCode code() const noexcept { return code_; }
  double measured() const noexcept { return measured_; }
  const std::string& stage() const noexcept { return stage_; }

  // Precondition failures map to CLI exit code 2.
  bool is_precondition() const noexcept;

 private:
  ErrorCode code_;
  double measured_;
  std::string stage_;
};

}  // namespace acu
