#include "bfp/error.hpp"

namespace bfp {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::MissingValue: return "MissingValue";
    case ErrorCode::UnparseableNumber: return "UnparseableNumber";
    case ErrorCode::DuplicateFirmYear: return "DuplicateFirmYear";
    case ErrorCode::NonPositiveTotalAssets: return "NonPositiveTotalAssets";
    case ErrorCode::WorkingCapitalMismatch: return "WorkingCapitalMismatch";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::TooFewObservations: return "TooFewObservations";
    case ErrorCode::ZeroVarianceColumn: return "ZeroVarianceColumn";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::SeparationDetected: return "SeparationDetected";
    case ErrorCode::SingularInformation: return "SingularInformation";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::ZeroStdErr: return "ZeroStdErr";
    case ErrorCode::DegenerateBoundary: return "DegenerateBoundary";
    case ErrorCode::AllDropped: return "AllDropped";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::UndefinedPrecision: return "UndefinedPrecision";
    case ErrorCode::UndefinedRecall: return "UndefinedRecall";
    case ErrorCode::SingleClassInput: return "SingleClassInput";
    case ErrorCode::FeatureMismatch: return "FeatureMismatch";
    case ErrorCode::InvalidModelFile: return "InvalidModelFile";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace bfp
