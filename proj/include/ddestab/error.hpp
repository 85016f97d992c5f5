#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ddestab {

enum class ErrorCode {
  // parameter validation
  NonPositiveAlpha,
  NonPositiveL,
  NegativeTau,
  NonPositiveF,
  NonFiniteField,
  InvalidArgument,
  // characteristic function
  PoleAtMinusAlpha,
  DenominatorVanishes,
  // eigensolver
  BoundaryZero,
  QuadratureNonInteger,
  NewtonDiverged,
  MaxDepthExceeded,
  // region
  BracketingFailed,
  // simulator
  IncompatibleBoundary,
  HistoryMismatch,
  DegenerateWindow,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for codes raised by input validation rather than numerics.
bool is_validation_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ddestab
