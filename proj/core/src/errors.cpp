#include "gensc/errors.hpp"

namespace gensc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kInsufficientCalibrationData: return "InsufficientCalibrationData";
    case ErrorCode::kMissingHead: return "MissingHead";
    case ErrorCode::kMissingFeatures: return "MissingFeatures";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kDegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kEmptyPrefix: return "EmptyPrefix";
    case ErrorCode::kInfeasibleTarget: return "InfeasibleTarget";
    case ErrorCode::kDegenerateClasses: return "DegenerateClasses";
    case ErrorCode::kTiedTopLogits: return "TiedTopLogits";
    case ErrorCode::kNoShiftLabelRows: return "NoShiftLabelRows";
    case ErrorCode::kFormat: return "FormatError";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace gensc
