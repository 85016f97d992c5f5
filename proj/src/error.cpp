#include "ddestab/error.hpp"

namespace ddestab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveAlpha: return "NonPositiveAlpha";
    case ErrorCode::NonPositiveL: return "NonPositiveL";
    case ErrorCode::NegativeTau: return "NegativeTau";
    case ErrorCode::NonPositiveF: return "NonPositiveF";
    case ErrorCode::NonFiniteField: return "NonFiniteField";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PoleAtMinusAlpha: return "PoleAtMinusAlpha";
    case ErrorCode::DenominatorVanishes: return "DenominatorVanishes";
    case ErrorCode::BoundaryZero: return "BoundaryZero";
    case ErrorCode::QuadratureNonInteger: return "QuadratureNonInteger";
    case ErrorCode::NewtonDiverged: return "NewtonDiverged";
    case ErrorCode::MaxDepthExceeded: return "MaxDepthExceeded";
    case ErrorCode::BracketingFailed: return "BracketingFailed";
    case ErrorCode::IncompatibleBoundary: return "IncompatibleBoundary";
    case ErrorCode::HistoryMismatch: return "HistoryMismatch";
    case ErrorCode::DegenerateWindow: return "DegenerateWindow";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveAlpha:
    case ErrorCode::NonPositiveL:
    case ErrorCode::NegativeTau:
    case ErrorCode::NonPositiveF:
    case ErrorCode::NonFiniteField:
    case ErrorCode::InvalidArgument:
    case ErrorCode::IncompatibleBoundary:
    case ErrorCode::HistoryMismatch:
      return true;
    default:
      return false;
  }
}

}  // namespace ddestab
