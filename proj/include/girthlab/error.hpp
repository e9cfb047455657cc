#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace girthlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters: dimension, exponent, modulus or alphabet out of range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Generators that collapse under reduction (identity, or two coinciding
/// generators). Carries the congruence that was violated.
class DegenerateSpecError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// The operation is defined only for a restricted shape of input.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A memory or word-count budget ran out; partial information is attached.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, int depth_reached, std::uint64_t visited)
      : Error(what), depth_reached_(depth_reached), visited_(visited) {}

  int depth_reached() const noexcept { return depth_reached_; }
  std::uint64_t visited() const noexcept { return visited_; }

 private:
  int depth_reached_;
  std::uint64_t visited_;
};

/// A computational check of a claimed identity did not hold.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace girthlab
