#pragma once

#include <stdexcept>
#include <string>

namespace gpc {

// Caller violated an operation's contract (bad dimension, non-finite input,
// malformed feedback, invalid handle, ...). Maps to CLI exit code 1.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Linear algebra failed even after jitter escalation. Maps to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double jitter)
      : std::runtime_error(what), jitter_(jitter) {}

  double jitter() const { return jitter_; }

 private:
  double jitter_;
};

// A bounded dictionary is full and the caller did not choose an eviction.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace gpc
