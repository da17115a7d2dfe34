#include "acu/errors.hpp"

namespace acu {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::SingularInput: return "SingularInput";
    case ErrorCode::NotAlmostUnitary: return "NotAlmostUnitary";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::BoundaryEigenvalue: return "BoundaryEigenvalue";
    case ErrorCode::DimensionCap: return "DimensionCap";
    case ErrorCode::NotAlmostProjection: return "NotAlmostProjection";
    case ErrorCode::ProjectionsTooFar: return "ProjectionsTooFar";
    case ErrorCode::NotAlmostOrthogonal: return "NotAlmostOrthogonal";
    case ErrorCode::StageFailure: return "StageFailure";
    case ErrorCode::CommutatorTooLarge: return "CommutatorTooLarge";
    case ErrorCode::CurveNearZero: return "CurveNearZero";
    case ErrorCode::PreconditionUnsatisfiable: return "PreconditionUnsatisfiable";
    case ErrorCode::ObstructionNonzero: return "ObstructionNonzero";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::OracleDidNotConverge: return "OracleDidNotConverge";
    case ErrorCode::OutOfAnnulus: return "OutOfAnnulus";
    case ErrorCode::NoSpectralGap: return "NoSpectralGap";
    case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::PathNotAdmissible: return "PathNotAdmissible";
    case ErrorCode::StagePreconditionFailed: return "StagePreconditionFailed";
    case ErrorCode::ArcsTooClose: return "ArcsTooClose";
    case ErrorCode::Undefined: return "Undefined";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what, double measured, std::string stage)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code),
      measured_(measured),
      stage_(std::move(stage)) {}

bool Error::is_precondition() const noexcept {
  switch (code_) {
    case ErrorCode::PreconditionUnsatisfiable:
    case ErrorCode::StagePreconditionFailed:
    case ErrorCode::ObstructionNonzero:
    case ErrorCode::CommutatorTooLarge:
    case ErrorCode::NotAlmostUnitary:
    case ErrorCode::NotAlmostProjection:
    case ErrorCode::NotAlmostOrthogonal:
    case ErrorCode::ProjectionsTooFar:
    case ErrorCode::NoSpectralGap:
    case ErrorCode::OutOfAnnulus:
    case ErrorCode::InvalidEpsilon:
    case ErrorCode::PathNotAdmissible:
    case ErrorCode::StageFailure:
      return true;
    default:
      return false;
  }
}

}  // namespace acu
