#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opetopic {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text; offset is a byte position into the source.
struct ParseError : Error {
  std::size_t offset;
  ParseError(const std::string& what, std::size_t off)
      : Error(what + " at offset " + std::to_string(off)), offset(off) {}
};

struct SortError : Error {
  using Error::Error;
};

// A value was used in a role it cannot play (bad position, non-total
// decoration, index outside a table, ...).
struct EvalError : Error {
  using Error::Error;
};

// Enumeration exceeded a configured limit.
struct BoundError : Error {
  using Error::Error;
};

}  // namespace opetopic
