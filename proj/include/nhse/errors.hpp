#pragma once

#include <stdexcept>
#include <string>

namespace nhse {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid physical parameters or malformed inputs.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (e.g. beta = 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A polynomial lost its leading or trailing coefficient.
class DegreeCollapseError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Raised when an amplified wave field leaves the representable range.
class HorizonTruncation : public NumericalError {
 public:
  HorizonTruncation(const std::string& what, double last_valid_time)
      : NumericalError(what), last_valid_time_(last_valid_time) {}
  double last_valid_time() const noexcept { return last_valid_time_; }

 private:
  double last_valid_time_;
};

/// Two independent GBZ computations disagree.
class CrossValidationError : public NumericalError {
 public:
  CrossValidationError(const std::string& what, double deviation)
      : NumericalError(what), deviation_(deviation) {}
  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

class NoTouchingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace nhse
