#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pcsmaa {

enum class Errc {
  NotSquare,
  NonPositiveEntry,
  ReciprocityViolation,
  BadDiagonal,
  DisconnectedGraph,
  IncompleteMatrix,
  NoConvergence,
  UnsupportedSize,
  Overflow,
  CapExceeded,
  BadAccuracy,
  BadConfidence,
  BadPlan,
  WalkStall,
  SpaceTooLarge,
  MixedProblems,
  Schema,
  IndexOutOfRange,
};

std::string_view to_string(Errc code);

// Whether an error describes the input data (as opposed to an infeasible
// run configuration). The CLI maps the two families to different exit codes.
bool is_input_error(Errc code);

// A single problem found while checking a matrix. `matrix` names the
// criterion (or "weights") when the check runs over a whole problem.
struct Violation {
  Errc code;
  std::string matrix;
  std::size_t row = 0;
  std::size_t col = 0;
  std::string message;
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Thrown when input validation finds one or more violations. `code()` is the
// code of the first violation.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);

  const std::vector<Violation>& violations() const noexcept {
    return violations_;
  }

 private:
  std::vector<Violation> violations_;
};

}  // namespace pcsmaa
