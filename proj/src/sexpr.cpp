#include "opetopic/sexpr.hpp"

#include <cctype>

#include "opetopic/error.hpp"

namespace opetopic::sexpr {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size()) {
      char ch = text_[pos_];
      if (ch == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  Datum read() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    Datum d;
    d.offset = pos_;
    char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      d.is_list = true;
      for (;;) {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unterminated list", d.offset);
        if (text_[pos_] == ')') {
          ++pos_;
          return d;
        }
        d.items.push_back(read());
      }
    }
    if (ch == ')') throw ParseError("unexpected ')'", pos_);
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c))) break;
      ++pos_;
    }
    d.atom = std::string(text_.substr(start, pos_ - start));
    return d;
  }

  std::size_t pos() const { return pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string Datum::to_string() const {
  if (!is_list) return atom;
  std::string out = "(";
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out += ' ';
    out += items[k].to_string();
  }
  return out + ")";
}

Datum parse(std::string_view text) {
  Reader r(text);
  Datum d = r.read();
  if (!r.at_end()) throw ParseError("trailing input after datum", r.pos());
  return d;
}

std::vector<Datum> parse_all(std::string_view text) {
  Reader r(text);
  std::vector<Datum> out;
  while (!r.at_end()) out.push_back(r.read());
  return out;
}

bool is_name(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

bool is_element(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace opetopic::sexpr
