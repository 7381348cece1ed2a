#pragma once

#include <stdexcept>

namespace mvci {

// Rejected inputs: malformed files, out-of-range parameters, inconsistent shapes.
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An exhaustive search refused to start (or to continue) because its node
// count would exceed the configured budget.
class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mvci
