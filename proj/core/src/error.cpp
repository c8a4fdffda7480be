#include "hq/error.hpp"

namespace hq {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPositiveBound: return "NonPositiveBound";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::DegenerateRectangle: return "DegenerateRectangle";
    case ErrorCode::DivergentRectangle: return "DivergentRectangle";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NotTruncated: return "NotTruncated";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::ModulusViolated: return "ModulusViolated";
    case ErrorCode::EvaluationError: return "EvaluationError";
    case ErrorCode::EngineFailure: return "EngineFailure";
    case ErrorCode::UnsupportedCase: return "UnsupportedCase";
    case ErrorCode::SeriesDivergence: return "SeriesDivergence";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
  }
  return "Unknown";
}

}  // namespace hq
