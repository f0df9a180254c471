#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace opetopic::sexpr {

// Minimal s-expression datum: either an atom or a list.
struct Datum {
  bool is_list = false;
  std::string atom;
  std::vector<Datum> items;
  std::size_t offset = 0;

  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
  bool head_is(std::string_view s) const {
    return is_list && !items.empty() && items.front().is_atom(s);
  }
  std::string to_string() const;
};

// Parses exactly one datum; trailing non-whitespace is an error.
Datum parse(std::string_view text);
std::vector<Datum> parse_all(std::string_view text);

bool is_name(std::string_view s);
// Carrier elements may also start with a digit.
bool is_element(std::string_view s);

}  // namespace opetopic::sexpr
