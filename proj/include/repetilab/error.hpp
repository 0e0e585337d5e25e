#pragma once

#include <stdexcept>
#include <string>

namespace repetilab {

// Malformed input (JSON, command-line parameters, family parameters).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A well-formed request that cannot be evaluated, e.g. a prefix longer
// than the expansion it is taken from.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A search or expansion hit a hard resource cap.
class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace repetilab
