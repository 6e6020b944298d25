#pragma once

#include <stdexcept>
#include <string>

namespace tepui {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or variable sets do not match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the domain, in no cell, or a precondition on the
/// geometric input does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed text or JSON input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The input is well formed but the requested computation does not support it.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Numerical integration left the admissible region or produced non-finite values.
class BlowUpError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tepui
