#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ratile {

enum class ErrorKind {
  InvalidInput,
  DegreeZero,
  NotPrimitive,
  NotExpanding,
  TriviallyReducible,
  DegenerateInput,
  NoConvergence,
  DuplicateDigit,
  DigitNotInZAlpha,
  NotInShiftedRing,
  NoDigitMatches,
  MultipleDigitsMatch,
  IndexLawViolation,
  BoundExceeded,
  DepthTooLarge,
  BudgetExceeded,
  Internal,
};

std::string_view to_string(ErrorKind kind);

/// Errors that abort an operation. Verdicts such as "not a member" are
/// ordinary return values and never use this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures caused by bad user input (as opposed to broken
  /// internal invariants or exhausted budgets).
  bool is_input_error() const noexcept;

 private:
  ErrorKind kind_;
};

}  // namespace ratile
