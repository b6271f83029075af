#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace semiflow {

class Trajectory;

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated by the caller (bad time, index, dimension, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of subdivisions before reaching the tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double partial, double error_estimate)
      : Error(what), partial_(partial), error_estimate_(error_estimate) {}
  double partial() const noexcept { return partial_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double partial_;
  double error_estimate_;
};

/// Skorokhod distance refinement did not close its bracket within budget.
class MetricError : public Error {
 public:
  MetricError(const std::string& what, double lower, double upper)
      : Error(what), lower_(lower), upper_(upper) {}
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  double lower_;
  double upper_;
};

/// A state that is not a key of the bundle was queried.
class UnknownInitialPoint : public Error {
 public:
  UnknownInitialPoint(const std::string& what, std::vector<double> point)
      : Error(what), point_(std::move(point)) {}
  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

class MissingEnergyCoordinate : public Error {
 public:
  using Error::Error;
};

/// Closure generation hit its size budget; the partial result is still usable.
class ClosureBudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace semiflow
