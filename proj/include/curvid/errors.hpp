#pragma once

#include <stdexcept>
#include <string>

namespace curvid {

/// Malformed monomial structure (bad pairing, unknown factor, ...).
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Text grammar could not be parsed.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Valence or weight mismatch in polynomial arithmetic.
class ArithmeticError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Request outside what the implementation supports (weight too large,
/// truncation order too low, missing derivative data).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Too few samples to decide a rank question.
class InconclusiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear system has no solution; indicates a convention mismatch or a bug.
class InconsistentSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature or finite-difference gate failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace curvid
