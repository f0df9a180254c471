#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace opetopic {

enum class ValueKind {
  Unit,      // tt
  Atom,      // element of a finite carrier
  Pair,
  Dec,       // decoration: (position, value) entries in canonical position order
  Leaf,      // lf i
  Node,      // nd i c delta eps; i is the base index the tree sits over
  Here,
  Under,     // under p q
  Refl,      // the witness of a decidable equality
  LeafDown,  // lfd j
  NodeDown,  // ndd j c delta eps
};

// Immutable tagged tree.  Values are compared structurally; copies share
// structure and carry a precomputed hash.
class Value {
 public:
  Value();  // tt

  static Value unit() { return Value(); }
  static Value atom(std::string name);
  static Value pair(Value a, Value b);
  static Value dec(const std::vector<std::pair<Value, Value>>& entries);
  static Value leaf(Value idx);
  static Value node(Value idx, Value cns, Value delta, Value eps);
  static Value here();
  static Value under(Value p, Value q);
  static Value refl();
  static Value leaf_down(Value j);
  static Value node_down(Value j, Value cns, Value delta, Value eps);

  ValueKind kind() const { return rep_->kind; }
  bool is(ValueKind k) const { return kind() == k; }
  const std::string& name() const { return rep_->atom; }
  std::size_t hash() const { return rep_->hash; }

  // Raw children; for Dec the keys and values alternate.
  const std::vector<Value>& kids() const { return rep_->kids; }
  const Value& kid(std::size_t k) const { return rep_->kids.at(k); }

  // Pair / Under.
  const Value& fst() const { return kid(0); }
  const Value& snd() const { return kid(1); }

  // Leaf / Node / LeafDown / NodeDown.
  const Value& tree_idx() const { return kid(0); }
  const Value& tree_cns() const { return kid(1); }
  const Value& tree_delta() const { return kid(2); }
  const Value& tree_eps() const { return kid(3); }

  // Dec.
  std::size_t dec_size() const { return rep_->kids.size() / 2; }
  const Value& dec_key(std::size_t k) const { return kid(2 * k); }
  const Value& dec_val(std::size_t k) const { return kid(2 * k + 1); }
  // Throws EvalError when p has no entry.
  const Value& at(const Value& p) const;
  const Value* find(const Value& p) const;

  std::string to_string() const;

  friend bool operator==(const Value& a, const Value& b);
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
  friend bool operator<(const Value& a, const Value& b);

 private:
  struct Rep {
    ValueKind kind;
    std::string atom;
    std::vector<Value> kids;
    std::size_t hash;
  };
  static Value make(ValueKind kind, std::string atom, std::vector<Value> kids);
  explicit Value(std::shared_ptr<const Rep> r) : rep_(std::move(r)) {}

  std::shared_ptr<const Rep> rep_;
};

struct ValueHash {
  std::size_t operator()(const Value& v) const { return v.hash(); }
};

// Builds a decoration over `positions` from f.
Value make_dec(const std::vector<Value>& positions, const std::function<Value(const Value&)>& f);

// Number of Node / NodeDown constructors in a tree.
std::size_t tree_nodes(const Value& t);

// Text format:
//   tt | NAME | (pair v v) | ((pos . v) ...) | () | (lf v) | (nd v v v v)
//   | here | (under v v) | refl | (lfd v) | (ndd v v v v)
Value parse_value(std::string_view text);

}  // namespace opetopic
