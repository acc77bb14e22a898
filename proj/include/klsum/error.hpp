#pragma once

#include <stdexcept>
#include <string>

namespace klsum {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition does not hold (non-prime modulus, x = 0, odd xi, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// The request exceeds a table or enumeration budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Two evaluation routes disagree beyond their tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// An algebraic identity that must hold by construction failed.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace klsum
