#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gensc {

enum class ErrorCode {
  kInvalidArgument,
  kValidation,
  kInsufficientCalibrationData,
  kMissingHead,
  kMissingFeatures,
  kEmptyReference,
  kDegenerateSpectrum,
  kZeroVariance,
  kEmptyPrefix,
  kInfeasibleTarget,
  kDegenerateClasses,
  kTiedTopLogits,
  kNoShiftLabelRows,
  kFormat,
  kShapeMismatch,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map them to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gensc
