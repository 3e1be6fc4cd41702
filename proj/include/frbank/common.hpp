#pragma once

#include <stdexcept>
#include <string>

namespace frbank {

// Invalid user input or a parameter outside its economic domain.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Internal inconsistency: a solver failed where the model guarantees a
// solution. Indicates a bug or a classification/solver disagreement, never
// a user error.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace frbank
