#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace antipodal {

// Malformed or out-of-contract input (bad labels, unknown vertices,
// incomplete graph where a complete one is required, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An exhaustive enumeration was refused because the instance exceeds the
// supported size.
class SizeLimitError : public std::length_error {
 public:
  SizeLimitError(const std::string& what, int bound)
      : std::length_error(what + " (bound: " + std::to_string(bound) + ")"),
        bound_(bound) {}
  int bound() const { return bound_; }

 private:
  int bound_;
};

// One or more preconditions of a completion or construction do not hold.
// Every violated clause is listed in diagnostics().
class PreconditionError : public InputError {
 public:
  PreconditionError(const std::string& what, std::vector<std::string> diagnostics)
      : InputError(what), diagnostics_(std::move(diagnostics)) {}
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

// The input satisfied all preconditions but no completion was found.
class NoCompletionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The backtracking fallback produced a completion that some preserved
// automorphism of the input does not fix.
class CompletionNotEquivariant : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace antipodal
