#include "opetopic/value.hpp"

#include "opetopic/error.hpp"
#include "opetopic/sexpr.hpp"

namespace opetopic {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

Value Value::make(ValueKind kind, std::string atom, std::vector<Value> kids) {
  std::size_t h = mix(static_cast<std::size_t>(kind) + 1, std::hash<std::string>{}(atom));
  for (const Value& k : kids) h = mix(h, k.hash());
  return Value(std::make_shared<const Rep>(Rep{kind, std::move(atom), std::move(kids), h}));
}

Value::Value() {
  static const std::shared_ptr<const Rep> tt = [] {
    return std::make_shared<const Rep>(Rep{ValueKind::Unit, "", {}, mix(1, std::hash<std::string>{}(""))});
  }();
  rep_ = tt;
}

Value Value::atom(std::string name) {
  if (!sexpr::is_element(name) || name == "tt" || name == "here" || name == "refl")
    throw EvalError("invalid element name '" + name + "'");
  return make(ValueKind::Atom, std::move(name), {});
}

Value Value::pair(Value a, Value b) { return make(ValueKind::Pair, "", {std::move(a), std::move(b)}); }

Value Value::dec(const std::vector<std::pair<Value, Value>>& entries) {
  std::vector<Value> kids;
  kids.reserve(entries.size() * 2);
  for (const auto& [k, v] : entries) {
    kids.push_back(k);
    kids.push_back(v);
  }
  return make(ValueKind::Dec, "", std::move(kids));
}

Value Value::leaf(Value idx) { return make(ValueKind::Leaf, "", {std::move(idx)}); }

Value Value::node(Value idx, Value cns, Value delta, Value eps) {
  return make(ValueKind::Node, "", {std::move(idx), std::move(cns), std::move(delta), std::move(eps)});
}

Value Value::here() {
  static const Value h = make(ValueKind::Here, "", {});
  return h;
}

Value Value::under(Value p, Value q) { return make(ValueKind::Under, "", {std::move(p), std::move(q)}); }

Value Value::refl() {
  static const Value r = make(ValueKind::Refl, "", {});
  return r;
}

Value Value::leaf_down(Value j) { return make(ValueKind::LeafDown, "", {std::move(j)}); }

Value Value::node_down(Value j, Value cns, Value delta, Value eps) {
  return make(ValueKind::NodeDown, "", {std::move(j), std::move(cns), std::move(delta), std::move(eps)});
}

const Value* Value::find(const Value& p) const {
  if (!is(ValueKind::Dec)) return nullptr;
  for (std::size_t k = 0; k < dec_size(); ++k)
    if (dec_key(k) == p) return &dec_val(k);
  return nullptr;
}

const Value& Value::at(const Value& p) const {
  if (!is(ValueKind::Dec)) throw EvalError("not a decoration: " + to_string());
  if (const Value* v = find(p)) return *v;
  throw EvalError("decoration " + to_string() + " has no entry at " + p.to_string());
}

std::string Value::to_string() const {
  switch (kind()) {
    case ValueKind::Unit: return "tt";
    case ValueKind::Atom: return name();
    case ValueKind::Here: return "here";
    case ValueKind::Refl: return "refl";
    case ValueKind::Pair: return "(pair " + fst().to_string() + " " + snd().to_string() + ")";
    case ValueKind::Under: return "(under " + fst().to_string() + " " + snd().to_string() + ")";
    case ValueKind::Leaf: return "(lf " + tree_idx().to_string() + ")";
    case ValueKind::LeafDown: return "(lfd " + tree_idx().to_string() + ")";
    case ValueKind::Node:
    case ValueKind::NodeDown: {
      std::string out = is(ValueKind::Node) ? "(nd" : "(ndd";
      for (const Value& k : kids()) out += " " + k.to_string();
      return out + ")";
    }
    case ValueKind::Dec: {
      std::string out = "(";
      for (std::size_t k = 0; k < dec_size(); ++k) {
        if (k) out += ' ';
        out += "(" + dec_key(k).to_string() + " . " + dec_val(k).to_string() + ")";
      }
      return out + ")";
    }
  }
  return "?";
}

bool operator==(const Value& a, const Value& b) {
  if (a.rep_ == b.rep_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.name() != b.name() ||
      a.kids().size() != b.kids().size())
    return false;
  for (std::size_t k = 0; k < a.kids().size(); ++k)
    if (a.kids()[k] != b.kids()[k]) return false;
  return true;
}

bool operator<(const Value& a, const Value& b) {
  if (a.rep_ == b.rep_) return false;
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  if (a.name() != b.name()) return a.name() < b.name();
  if (a.kids().size() != b.kids().size()) return a.kids().size() < b.kids().size();
  for (std::size_t k = 0; k < a.kids().size(); ++k) {
    if (a.kids()[k] < b.kids()[k]) return true;
    if (b.kids()[k] < a.kids()[k]) return false;
  }
  return false;
}

Value make_dec(const std::vector<Value>& positions, const std::function<Value(const Value&)>& f) {
  std::vector<std::pair<Value, Value>> entries;
  entries.reserve(positions.size());
  for (const Value& p : positions) entries.emplace_back(p, f(p));
  return Value::dec(entries);
}

std::size_t tree_nodes(const Value& t) {
  if (!t.is(ValueKind::Node) && !t.is(ValueKind::NodeDown)) return 0;
  std::size_t n = 1;
  const Value& eps = t.tree_eps();
  for (std::size_t k = 0; k < eps.dec_size(); ++k) n += tree_nodes(eps.dec_val(k));
  return n;
}

namespace {

Value build(const sexpr::Datum& d) {
  if (!d.is_list) {
    if (d.atom == "tt") return Value::unit();
    if (d.atom == "here") return Value::here();
    if (d.atom == "refl") return Value::refl();
    if (!sexpr::is_element(d.atom)) throw ParseError("invalid value atom '" + d.atom + "'", d.offset);
    return Value::atom(d.atom);
  }
  if (d.items.empty() || d.items[0].is_list) {
    std::vector<std::pair<Value, Value>> entries;
    for (const sexpr::Datum& e : d.items) {
      if (!e.is_list || e.items.size() != 3 || !e.items[1].is_atom("."))
        throw ParseError("decoration entries must be (pos . value)", e.offset);
      entries.emplace_back(build(e.items[0]), build(e.items[2]));
    }
    return Value::dec(entries);
  }
  const std::string& head = d.items[0].atom;
  auto arity = [&](std::size_t n) {
    if (d.items.size() != n + 1)
      throw ParseError("'" + head + "' expects " + std::to_string(n) + " arguments", d.offset);
  };
  auto sub = [&](std::size_t k) { return build(d.items[k]); };
  if (head == "pair") { arity(2); return Value::pair(sub(1), sub(2)); }
  if (head == "under") { arity(2); return Value::under(sub(1), sub(2)); }
  if (head == "lf") { arity(1); return Value::leaf(sub(1)); }
  if (head == "lfd") { arity(1); return Value::leaf_down(sub(1)); }
  if (head == "nd") { arity(4); return Value::node(sub(1), sub(2), sub(3), sub(4)); }
  if (head == "ndd") { arity(4); return Value::node_down(sub(1), sub(2), sub(3), sub(4)); }
  throw ParseError("unknown value form '" + head + "'", d.offset);
}

}  // namespace

Value parse_value(std::string_view text) { return build(sexpr::parse(text)); }

}  // namespace opetopic
