#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wm {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs violate a documented precondition (shape, range, grid mismatch).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Configuration file or override is malformed. Maps to CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Evolution produced non-finite values.
class BlowUpError : public Error {
 public:
  BlowUpError(std::size_t step, const std::string& what)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace wm
