#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hq {

enum class ErrorCode {
  InvalidArgument,
  NonPositiveBound,
  BudgetExhausted,
  DegenerateRectangle,
  DivergentRectangle,
  DomainError,
  OutOfRange,
  NotTruncated,
  DomainMismatch,
  ModulusViolated,
  EvaluationError,
  EngineFailure,
  UnsupportedCase,
  SeriesDivergence,
  DimensionTooLarge,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying one of the library's error codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hq
