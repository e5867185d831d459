#pragma once

#include <stdexcept>
#include <string>

namespace fkf {

// Bad input from the caller: malformed specs, out-of-range ids, wrong counts.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exact enumeration refused because the state space exceeds the cap.
class EnumerationCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No set of pairwise disjoint defect lines could be found.
class RoutingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal identity that must hold exactly did not (indicates a bug).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace fkf
