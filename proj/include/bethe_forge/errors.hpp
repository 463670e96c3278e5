#pragma once

#include <stdexcept>
#include <string>

namespace bethe {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files (CLI exit code 2).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Input violates one of the classification hypotheses: rank-1 symmetry or a
// non-empty pseudo-excitation channel (CLI exit code 3).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

// The requested operation is not available for this input (CLI exit code 4).
class ModeError : public Error {
 public:
  using Error::Error;
};

// A rational expression hit a vanishing denominator.
class SingularError : public Error {
 public:
  using Error::Error;
};

}  // namespace bethe
