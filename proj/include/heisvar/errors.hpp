#pragma once

#include <stdexcept>
#include <string>

namespace heisvar {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Any numeric failure that is not a domain violation.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative method stopped before reaching the requested tolerance.
class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : NumericError(what + " (achieved error estimate " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Evaluation refused because the result could not meet its tolerance
/// (e.g. cancellation in an alternating series).
class GuardError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Enumeration or allocation would exceed a configured cap.
class ResourceError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A least-squares fit had no usable data.
class FitError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A mandatory internal consistency check failed.
class VerificationError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace heisvar
