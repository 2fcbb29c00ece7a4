#pragma once

#include <stdexcept>
#include <string>

namespace quenchlab {

/// Bad argument to a builder or operation (sizes, ranges, unknown names).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested interaction family is not summable (e.g. power-law alpha <= 1/2).
class StabilityViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An operation was applied to an object that does not satisfy its contract,
/// e.g. sampling disorder on a deterministic model.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A disorder assignment does not cover every term of the model.
class IncompleteDisorder : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Tensor quadrature would exceed the configured point cap.
class SchemeTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The averaging scheme does not support the requested check.
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace quenchlab
