#pragma once

#include <stdexcept>
#include <string>

namespace stlc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lexical or grammatical failure; carries a character offset into the input.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t at)
      : Error(msg + " (at offset " + std::to_string(at) + ")"), offset(at) {}
  std::size_t offset;
};

struct TypeCheckError : Error {
  using Error::Error;
};

// A term does not have the structural shape an operation requires.
struct ShapeError : Error {
  using Error::Error;
};

struct PositionError : Error {
  using Error::Error;
};

// Raised when an internally constructed witness fails re-verification.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace stlc
