#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jcd {

enum class ErrorCode {
  kZeroChannel,
  kRankDeficient,
  kSingularRegularizedMatrix,
  kUnsupportedAlphabet,
  kEmptyHypothesisSet,
  kZeroConstellation,
  kUnknownScenario,
  kParseError,
  kValidationError,
  kIoError,
  kUnplottable,
};

std::string_view ErrorName(ErrorCode code);

// True for failures caused by the numbers rather than by the user's input
// (the CLI maps these to exit code 2).
bool IsNumericalFailure(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace jcd
