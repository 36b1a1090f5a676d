#pragma once

#include <stdexcept>
#include <string>

namespace phsq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated precondition on an argument (range, dimension).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Bad configuration input. Carries the offending key and, when known, the line.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, int line, const std::string& what)
      : Error(format(key, line, what)), key_(std::move(key)), line_(line) {}

  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  static std::string format(const std::string& key, int line, const std::string& what) {
    std::string s = "config";
    if (line > 0) s += " line " + std::to_string(line);
    if (!key.empty()) s += " [" + key + "]";
    return s + ": " + what;
  }

  std::string key_;
  int line_;
};

/// Numerical failure: non-convergence, broken invariant, failed self-check.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class MeanSpinVanished : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InvariantViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureMismatch : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureNotConverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoInteriorMinimum : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationNotConverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TraceDrift : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PhaseUnwrapAmbiguity : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace phsq
