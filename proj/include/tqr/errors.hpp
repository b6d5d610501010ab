#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tqr {

/// Base class for every numerical-domain failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Givens pivot among the first n-1 columns vanished: (T, s) lies outside
/// the domain of the signed step.
class AlmostSingular : public Error {
 public:
  AlmostSingular(std::size_t column, double pivot)
      : Error("almost singular: pivot " + std::to_string(pivot) + " at column " +
              std::to_string(column)),
        column_(column),
        pivot_(pivot) {}
  std::size_t column() const noexcept { return column_; }
  double pivot() const noexcept { return pivot_; }

 private:
  std::size_t column_;
  double pivot_;
};

/// T - sI is singular (s is an eigenvalue within tolerance).
class Singular : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Lanczos recurrence lost rank: a weight is too close to zero.
class Breakdown : public Error {
 public:
  using Error::Error;
};

class DuplicateEigenvalue : public Error {
 public:
  using Error::Error;
};

class CalibrationFailed : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class WrongStrategy : public Error {
 public:
  using Error::Error;
};

/// A step inside an iteration failed; wraps the index of the offending step.
class StepFailure : public Error {
 public:
  StepFailure(std::size_t step, const std::string& what)
      : Error("step " + std::to_string(step) + " failed: " + what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace tqr
