#pragma once

#include <stdexcept>
#include <string>

namespace qew {

// Bad input: out-of-domain arguments, malformed configs. CLI exit code 1.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class ValidationError : public DomainError {
public:
  using DomainError::DomainError;
};

// The computation itself failed (no root, overflow, quadrature did not
// converge). CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class OverflowError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

} // namespace qew
