#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace msocard {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula text. `position()` is a byte offset into the input.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t position)
      : Error(message + " at offset " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Well-formedness violations: unknown symbols, arity or sort mismatches,
/// unbound variables, variable capture.
class FormulaError : public Error {
 public:
  using Error::Error;
};

/// Automaton operations applied to incompatible inputs.
class AutomatonError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters or violated preconditions (bounds, ranges).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace msocard
