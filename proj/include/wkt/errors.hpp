#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wkt {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Request outside what the implementation covers (e.g. a Bessel order).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// A stated precondition (delta <= delta0, eta >= eta0, ...) is violated.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An integral or gauge does not converge.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Adaptive refinement could not reach the requested tolerance.
class ToleranceError : public Error {
 public:
  using Error::Error;
};

// A gauge needed by a computation is infinite.
class GaugeError : public Error {
 public:
  using Error::Error;
};

// Malformed input data; row is 1-based, 0 when not tied to a row.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t row)
      : Error(row ? what + " (row " + std::to_string(row) + ")" : what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace wkt
