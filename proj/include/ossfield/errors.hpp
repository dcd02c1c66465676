#pragma once

#include <stdexcept>
#include <string>

namespace ossf {

// Error taxonomy shared by the whole library.  The C API maps each class
// onto a stable integer code.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input violates a mathematical precondition (c <= 0, negative spectrum, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed input: NaN/Inf entries, dimension mismatch, bad CSV.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure failed to converge or lost accuracy.
class NumericError : public Error {
 public:
  using Error::Error;
};

// The problem is too ill-conditioned to resolve at the requested tolerance
// (eigenvalue clusters that can neither be merged nor separated).
class ConditioningError : public Error {
 public:
  using Error::Error;
};

}  // namespace ossf
