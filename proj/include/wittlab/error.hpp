#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wittlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed specs, violated record invariants, singular models
/// where a smooth one is required.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Text that does not match the quadric grammar.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : ValidationError(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Operands that belong to different fields.
class ContextError : public Error {
 public:
  using Error::Error;
};

/// Inversion of zero and similar undefined field operations.
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

/// A computation would need GF(2^k) with k above the supported cap, or a work
/// budget was exceeded.
class FieldCapError : public Error {
 public:
  using Error::Error;
};

class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Point counts that cannot come from a curve of the stated genus.
class InconsistentCountsError : public Error {
 public:
  using Error::Error;
};

}  // namespace wittlab
