#pragma once

#include <stdexcept>
#include <string>

namespace soscert {

/// Malformed or inconsistent user input (files, CLI arguments, shapes).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

class DivisionByZero : public std::domain_error {
 public:
  explicit DivisionByZero(const std::string& what) : std::domain_error(what) {}
};

/// A computation exceeded its configured budget; callers map this to "inconclusive".
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace soscert
