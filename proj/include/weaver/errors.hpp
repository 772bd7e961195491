#pragma once

#include <stdexcept>
#include <string>

namespace weaver {

// Index or value outside the admissible domain of an operation.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Request would exceed a materialization or draw cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Dyadic CDF requested at a finer resolution than the construction depth.
class RefinementError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Parent populations whose means coincide cannot be standardized.
class DegeneracyError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller broke a precondition (e.g. unstandardized parents).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace weaver
