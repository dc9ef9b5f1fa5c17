#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nsgap {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed caller input (non-finite point, bad label, empty grid, ...).
class InvalidInputError : public Error {
 public:
  explicit InvalidInputError(const std::string& msg) : Error(msg) {}
};

/// A chain produced a non-finite drift or state; carries the offending state.
class DivergedChainError : public Error {
 public:
  DivergedChainError(const std::string& msg, std::vector<double> state)
      : Error(msg), state_(std::move(state)) {}
  const std::vector<double>& state() const { return state_; }

 private:
  std::vector<double> state_;
};

/// A time series is constant (zero variance); autocorrelation is undefined.
class DegenerateSeriesError : public Error {
 public:
  explicit DegenerateSeriesError(const std::string& msg) : Error(msg) {}
};

/// A step size violates the admissibility ceiling of a bound.
class ConstraintViolationError : public Error {
 public:
  explicit ConstraintViolationError(const std::string& msg) : Error(msg) {}
};

/// A bound was requested for a target that lacks the required regularity.
class AssumptionViolationError : public Error {
 public:
  explicit AssumptionViolationError(const std::string& msg) : Error(msg) {}
};

/// Discretization domain too small: stationary flow escapes [-R, R].
class InsufficientDomainError : public Error {
 public:
  explicit InsufficientDomainError(const std::string& msg) : Error(msg) {}
};

/// Transition matrix has more than one unit eigenvalue.
class ReducibilityError : public Error {
 public:
  explicit ReducibilityError(const std::string& msg) : Error(msg) {}
};

/// Too few usable data points for a fit or summary.
class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& msg) : Error(msg) {}
};

}  // namespace nsgap
