#pragma once

#include <stdexcept>
#include <string>

namespace liouville {

// Base for everything thrown by the library; `what()` carries context.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad problem data: invalid order, points outside the admissible set, sign
// violations of the potential, malformed configs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularEvaluationError : public Error {
 public:
  using Error::Error;
};

class BoundaryProximityError : public Error {
 public:
  using Error::Error;
};

class ResolutionError : public Error {
 public:
  using Error::Error;
};

// Quadrature or series truncation failed to meet the requested tolerance.
class ToleranceError : public Error {
 public:
  ToleranceError(const std::string& msg, double achieved)
      : Error(msg), achieved_error(achieved) {}
  double achieved_error;
};

class LinearSolveError : public Error {
 public:
  using Error::Error;
};

class ContractionFailureError : public Error {
 public:
  using Error::Error;
};

}  // namespace liouville
