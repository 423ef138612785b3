#include "jcd/error.hpp"

namespace jcd {

std::string_view ErrorName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroChannel: return "ZeroChannel";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kSingularRegularizedMatrix: return "SingularRegularizedMatrix";
    case ErrorCode::kUnsupportedAlphabet: return "UnsupportedAlphabet";
    case ErrorCode::kEmptyHypothesisSet: return "EmptyHypothesisSet";
    case ErrorCode::kZeroConstellation: return "ZeroConstellation";
    case ErrorCode::kUnknownScenario: return "UnknownScenario";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kUnplottable: return "Unplottable";
  }
  return "Unknown";
}

bool IsNumericalFailure(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroChannel:
    case ErrorCode::kRankDeficient:
    case ErrorCode::kSingularRegularizedMatrix:
    case ErrorCode::kEmptyHypothesisSet:
    case ErrorCode::kZeroConstellation:
      return true;
    default:
      return false;
  }
}

}  // namespace jcd
