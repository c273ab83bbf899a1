#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bfp {

enum class ErrorCode {
  // ingest
  MissingColumn,
  MissingValue,
  UnparseableNumber,
  DuplicateFirmYear,
  NonPositiveTotalAssets,
  WorkingCapitalMismatch,
  InvalidLabel,
  EmptyDataset,
  // ratios
  ZeroDenominator,
  // descriptives
  TooFewObservations,
  ZeroVarianceColumn,
  // linalg / logit
  DimensionMismatch,
  NotPositiveDefinite,
  SeparationDetected,
  SingularInformation,
  NotConverged,
  ZeroStdErr,
  DegenerateBoundary,
  // selection
  AllDropped,
  KTooLarge,
  // eval
  LengthMismatch,
  UndefinedPrecision,
  UndefinedRecall,
  SingleClassInput,
  // cli / io
  FeatureMismatch,
  InvalidModelFile,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // message without the code prefix
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace bfp
