#pragma once

#include <stdexcept>
#include <string>

namespace whitham {

/// Input outside the mathematical domain of an operation (non-finite frequency,
/// singular derivative, out-of-range group velocity, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Caller violated a documented precondition (mismatched grids, bad sizes, ...).
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A dyadic band or frequency window that the lattice cannot resolve.
class BandError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Numerical failure while running: blow-up, NaN, near-singular quotient.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration or unreadable input file.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace whitham
