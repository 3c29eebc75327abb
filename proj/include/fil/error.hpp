#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fil {

enum class ErrorCode {
  InvalidFrequency,
  ShapeMismatch,
  InvalidLabelSpace,
  InvalidProbability,
  InvalidInterval,
  UnsupportedLabels,
  SampleTooLarge,
  EnumerationBudgetExceeded,
  EmptyConditioningEvent,
  OrderingRequired,
  UndefinedRatio,
  ParameterOutOfRange,
  DegenerateEstimator,
  InvalidTransform,
  InvalidStatistic,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the engine carries one of the codes above so the
/// CLI can map it onto an exit status and a machine-readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fil
