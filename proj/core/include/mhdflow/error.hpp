#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mhdflow {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position()` is the 0-based offset of the
/// offending character (the text length when input ended early).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error("syntax error at position " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Expression evaluation failure: unbound variable or an argument outside a
/// function's domain.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// A parameter point outside the declared k-domain box.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An object rejected at construction because an invariant does not hold
/// (unit determinant, family field set, sheet placement, ...).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Newton non-convergence, degenerate hodograph, singular Jacobian, or a
/// domain that touches a singular locus.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Scene file does not match the documented schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace mhdflow
