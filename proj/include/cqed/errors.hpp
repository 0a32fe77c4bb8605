#pragma once

#include <stdexcept>
#include <string>

namespace cqed {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad inputs: config violations, broken type invariants, out-of-domain
// arguments. The CLI maps these to exit code 2.
struct ValidationError : Error {
  using Error::Error;
};

// Arguments outside an operation's stated domain (e.g. |mF| > 4).
struct DomainError : ValidationError {
  using ValidationError::ValidationError;
};

// Requested temperature no longer corresponds to a trapped atom.
struct UntrappedRegimeError : ValidationError {
  using ValidationError::ValidationError;
};

// Solver/fit failures discovered at run time. CLI exit code 3.
struct NumericalError : Error {
  using Error::Error;
};

// Root-find target outside the attainable range of the model.
struct BracketingError : NumericalError {
  using NumericalError::NumericalError;
};

// Fit objective carries no information about the parameter.
struct NonIdentifiableError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace cqed
