#include "fil/error.hpp"

namespace fil {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidFrequency: return "InvalidFrequency";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidLabelSpace: return "InvalidLabelSpace";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::UnsupportedLabels: return "UnsupportedLabels";
    case ErrorCode::SampleTooLarge: return "SampleTooLarge";
    case ErrorCode::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case ErrorCode::EmptyConditioningEvent: return "EmptyConditioningEvent";
    case ErrorCode::OrderingRequired: return "OrderingRequired";
    case ErrorCode::UndefinedRatio: return "UndefinedRatio";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::DegenerateEstimator: return "DegenerateEstimator";
    case ErrorCode::InvalidTransform: return "InvalidTransform";
    case ErrorCode::InvalidStatistic: return "InvalidStatistic";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace fil
