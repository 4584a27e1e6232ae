#pragma once

#include <stdexcept>
#include <string>

namespace spsd {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// An eigen- or singular-value solver did not converge.
class DecompositionError : public Error {
 public:
  using Error::Error;
};

/// The middle matrix of a sketch is numerically zero.
class DegenerateSketchError : public Error {
 public:
  using Error::Error;
};

/// A structural error bound was requested but its rank precondition fails.
class BoundInapplicableError : public Error {
 public:
  using Error::Error;
};

/// No predictor exists for the requested (method, norm) combination.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data. `line()` is 1-based, 0 when not applicable.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spsd
