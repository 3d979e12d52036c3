#include "pcsmaa/error.hpp"

namespace pcsmaa {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NotSquare: return "NotSquare";
    case Errc::NonPositiveEntry: return "NonPositiveEntry";
    case Errc::ReciprocityViolation: return "ReciprocityViolation";
    case Errc::BadDiagonal: return "BadDiagonal";
    case Errc::DisconnectedGraph: return "DisconnectedGraph";
    case Errc::IncompleteMatrix: return "IncompleteMatrix";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::UnsupportedSize: return "UnsupportedSize";
    case Errc::Overflow: return "Overflow";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::BadAccuracy: return "BadAccuracy";
    case Errc::BadConfidence: return "BadConfidence";
    case Errc::BadPlan: return "BadPlan";
    case Errc::WalkStall: return "WalkStall";
    case Errc::SpaceTooLarge: return "SpaceTooLarge";
    case Errc::MixedProblems: return "MixedProblems";
    case Errc::Schema: return "Schema";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
  }
  return "Unknown";
}

bool is_input_error(Errc code) {
  switch (code) {
    case Errc::CapExceeded:
    case Errc::BadAccuracy:
    case Errc::BadConfidence:
    case Errc::BadPlan:
    case Errc::SpaceTooLarge:
      return false;
    default:
      return true;
  }
}

namespace {

std::string summarize(const std::vector<Violation>& violations) {
  if (violations.empty()) return "validation failed";
  std::string text = violations.front().message;
  if (violations.size() > 1) {
    text += " (and " + std::to_string(violations.size() - 1) + " more)";
  }
  return text;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(violations.empty() ? Errc::Schema : violations.front().code,
            summarize(violations)),
      violations_(std::move(violations)) {}

}  // namespace pcsmaa
