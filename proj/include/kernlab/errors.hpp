#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kernlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a precondition (dimension mismatch, empty input, bad index).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the domain on which a kernel is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DuplicateNodeError : public Error {
 public:
  DuplicateNodeError(std::size_t first, std::size_t second, double distance);

  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

/// A geometric quantity is not defined for the given input (e.g. q for a
/// single point).
class UndefinedQuantityError : public Error {
 public:
  using Error::Error;
};

/// Cholesky failed on every rung of the jitter ladder.
class FactorizationError : public Error {
 public:
  FactorizationError(std::size_t pivot, double pivot_value, double last_jitter);

  std::size_t pivot() const { return pivot_; }
  double pivot_value() const { return pivot_value_; }
  double last_jitter() const { return last_jitter_; }

 private:
  std::size_t pivot_;
  double pivot_value_;
  double last_jitter_;
};

/// A solve completed but its residual check failed in every available
/// precision.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Least-squares fit could not be formed (too few usable samples).
class FitError : public Error {
 public:
  using Error::Error;
};

/// Problem in an experiment config file; carries the offending line and key.
class ConfigError : public Error {
 public:
  ConfigError(int line, std::string field, const std::string& message);

  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

}  // namespace kernlab
