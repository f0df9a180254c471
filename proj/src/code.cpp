#include "opetopic/code.hpp"

#include <atomic>
#include <set>

#include "opetopic/error.hpp"
#include "opetopic/sexpr.hpp"

namespace opetopic {

namespace {

std::string next_serial() {
  static std::atomic<unsigned long> counter{0};
  return "#" + std::to_string(++counter);
}

}  // namespace

// ---------------------------------------------------------------------------
// Finite sets

std::vector<Value> FiniteSetSpec::values() const {
  std::vector<Value> out;
  out.reserve(elements.size());
  for (const std::string& e : elements) out.push_back(Value::atom(e));
  return out;
}

bool FiniteSetSpec::contains(const Value& v) const {
  if (!v.is(ValueKind::Atom)) return false;
  for (const std::string& e : elements)
    if (e == v.name()) return true;
  return false;
}

std::string FiniteSetSpec::to_string() const {
  std::string out = "(set " + name;
  for (const std::string& e : elements) out += " " + e;
  return out + ")";
}

FiniteSetSpec make_set(std::string name, std::vector<std::string> elements) {
  if (!sexpr::is_name(name)) throw EvalError("invalid set name '" + name + "'");
  std::set<std::string> seen;
  for (const std::string& e : elements) {
    Value::atom(e);  // validates the name
    if (!seen.insert(e).second) throw EvalError("duplicate element '" + e + "' in set " + name);
  }
  return FiniteSetSpec{std::move(name), std::move(elements)};
}

// ---------------------------------------------------------------------------
// Families

struct FamilyRef::Rep {
  FamilyKind kind;
  FiniteSetSpec set;
  FamilyTable table;
  std::shared_ptr<const DepMonadCode> dep;
  Fn fn;
  std::string name;
  std::string serial;
};

FamilyRef FamilyRef::unit() { return FamilyRef(std::make_shared<const Rep>(Rep{FamilyKind::Unit, {}, {}, {}, {}, {}, {}})); }

FamilyRef FamilyRef::constant(FiniteSetSpec set) {
  return FamilyRef(std::make_shared<const Rep>(Rep{FamilyKind::Const, std::move(set), {}, {}, {}, {}, {}}));
}

FamilyRef FamilyRef::table(std::string name, FamilyTable table) {
  for (const auto& [idx, elems] : table) {
    std::set<Value> seen;
    for (const Value& e : elems)
      if (!seen.insert(e).second)
        throw EvalError("table " + name + " repeats " + e.to_string() + " at " + idx.to_string());
  }
  return FamilyRef(std::make_shared<const Rep>(
      Rep{FamilyKind::Table, {}, std::move(table), {}, {}, std::move(name), next_serial()}));
}

FamilyRef FamilyRef::dep_idx(const DepMonadCode& dep) {
  return FamilyRef(std::make_shared<const Rep>(
      Rep{FamilyKind::DepIdx, {}, {}, std::make_shared<const DepMonadCode>(dep), {}, {}, {}}));
}

FamilyRef FamilyRef::fn(std::string name, Fn f) {
  return FamilyRef(std::make_shared<const Rep>(
      Rep{FamilyKind::Fn, {}, {}, {}, std::move(f), std::move(name), next_serial()}));
}

FamilyRef FamilyRef::eq(FiniteSetSpec set) {
  return FamilyRef(std::make_shared<const Rep>(Rep{FamilyKind::Eq, std::move(set), {}, {}, {}, {}, {}}));
}

FamilyKind FamilyRef::kind() const { return rep_->kind; }
const FiniteSetSpec& FamilyRef::set() const { return rep_->set; }
const FamilyTable& FamilyRef::table_data() const { return rep_->table; }
const FamilyRef::Fn& FamilyRef::function() const { return rep_->fn; }
const std::string& FamilyRef::name() const { return rep_->name; }

const DepMonadCode& FamilyRef::dep() const {
  if (!rep_->dep) throw EvalError("family " + to_string() + " is not a dependent-index family");
  return *rep_->dep;
}

std::string FamilyRef::to_string() const {
  switch (kind()) {
    case FamilyKind::Unit: return "(unit-fam)";
    case FamilyKind::Const: return "(const-fam " + set().to_string() + ")";
    case FamilyKind::Table: return "(table-fam " + name() + ")";
    case FamilyKind::DepIdx: return "(dep-idx-fam " + dep().to_string() + ")";
    case FamilyKind::Fn: return "(fn-fam " + name() + ")";
    case FamilyKind::Eq: return "(eq-fam " + set().to_string() + ")";
  }
  return "?";
}

std::string FamilyRef::key() const {
  if (kind() == FamilyKind::DepIdx) return "(dep-idx-fam " + dep().key() + ")";
  return to_string() + rep_->serial;
}

// ---------------------------------------------------------------------------
// Monad codes

MonadCode MonadCode::id() {
  static const MonadCode m(std::make_shared<const Rep>(Rep{MonadKind::Id, nullptr, nullptr, "(id)", "(id)", 0}));
  return m;
}

MonadCode MonadCode::pb(MonadCode base, FamilyRef fam) {
  std::string text = "(pb " + base.to_string() + " " + fam.to_string() + ")";
  std::string key = "(pb " + base.key() + " " + fam.key() + ")";
  int depth = base.depth();
  return MonadCode(std::make_shared<const Rep>(Rep{MonadKind::Pb, std::make_shared<const MonadCode>(std::move(base)),
                                                   std::make_shared<const FamilyRef>(std::move(fam)),
                                                   std::move(text), std::move(key), depth}));
}

MonadCode MonadCode::slice(MonadCode base) {
  std::string text = "(slice " + base.to_string() + ")";
  std::string key = "(slice " + base.key() + ")";
  int depth = base.depth() + 1;
  return MonadCode(std::make_shared<const Rep>(Rep{MonadKind::Slice, std::make_shared<const MonadCode>(std::move(base)),
                                                   nullptr, std::move(text), std::move(key), depth}));
}

const MonadCode& MonadCode::base() const {
  if (!rep_->base) throw EvalError("the identity monad has no base");
  return *rep_->base;
}

const FamilyRef& MonadCode::family() const {
  if (!rep_->fam) throw EvalError(to_string() + " is not a pullback");
  return *rep_->fam;
}

// ---------------------------------------------------------------------------
// Dependent codes

DepMonadCode DepMonadCode::id(FiniteSetSpec carrier) {
  std::string text = "(id-dep " + carrier.to_string() + ")";
  return DepMonadCode(std::make_shared<const Rep>(Rep{DepKind::Id, nullptr, std::move(carrier), {}, text, text}));
}

DepMonadCode DepMonadCode::pb(DepMonadCode base, DepFamily fam) {
  std::string famtext = fam.is_eq ? "eq" : "(table-fam " + fam.name + ")";
  std::string text = "(pb-dep " + base.to_string() + " " + famtext + ")";
  std::string key = "(pb-dep " + base.key() + " " + famtext + (fam.is_eq ? "" : next_serial()) + ")";
  return DepMonadCode(std::make_shared<const Rep>(
      Rep{DepKind::Pb, std::make_shared<const DepMonadCode>(std::move(base)), {}, std::move(fam), text, key}));
}

DepMonadCode DepMonadCode::slice(DepMonadCode base) {
  std::string text = "(slice-dep " + base.to_string() + ")";
  std::string key = "(slice-dep " + base.key() + ")";
  return DepMonadCode(
      std::make_shared<const Rep>(Rep{DepKind::Slice, std::make_shared<const DepMonadCode>(std::move(base)), {}, {}, text, key}));
}

const DepMonadCode& DepMonadCode::base() const {
  if (!rep_->base) throw EvalError("Id-down has no base");
  return *rep_->base;
}

MonadCode base_of(const DepMonadCode& md) {
  switch (md.kind()) {
    case DepKind::Id: return MonadCode::id();
    case DepKind::Pb: return MonadCode::pb(base_of(md.base()), FamilyRef::dep_idx(md.base()));
    case DepKind::Slice: return MonadCode::slice(base_of(md.base()));
  }
  throw EvalError("unknown dependent code");
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

using sexpr::Datum;

void want(const Datum& d, std::string_view head, std::size_t args) {
  if (!d.head_is(head) || d.items.size() != args + 1)
    throw ParseError("expected (" + std::string(head) + " ...) with " + std::to_string(args) + " arguments",
                     d.offset);
}

FiniteSetSpec set_of(const Datum& d) {
  if (!d.head_is("set") || d.items.size() < 2) throw ParseError("expected (set NAME elem ...)", d.offset);
  std::vector<std::string> elems;
  for (std::size_t k = 2; k < d.items.size(); ++k) {
    if (d.items[k].is_list) throw ParseError("set elements must be names", d.items[k].offset);
    elems.push_back(d.items[k].atom);
  }
  if (d.items[1].is_list) throw ParseError("set name must be a name", d.items[1].offset);
  try {
    return make_set(d.items[1].atom, std::move(elems));
  } catch (const EvalError& e) {
    throw ParseError(e.what(), d.offset);
  }
}

DepMonadCode dep_of(const Datum& d) {
  if (d.head_is("id-dep")) {
    want(d, "id-dep", 1);
    return DepMonadCode::id(set_of(d.items[1]));
  }
  if (d.head_is("pb-dep")) {
    want(d, "pb-dep", 2);
    if (!d.items[2].is_atom("eq")) throw ParseError("only the 'eq' dependent family is supported here", d.items[2].offset);
    return DepMonadCode::pb(dep_of(d.items[1]));
  }
  if (d.head_is("slice-dep")) {
    want(d, "slice-dep", 1);
    return DepMonadCode::slice(dep_of(d.items[1]));
  }
  throw ParseError("unknown dependent code '" + d.to_string() + "'", d.offset);
}

FamilyRef fam_of(const Datum& d, const TableLoader& loader) {
  if (d.head_is("unit-fam")) { want(d, "unit-fam", 0); return FamilyRef::unit(); }
  if (d.head_is("const-fam")) { want(d, "const-fam", 1); return FamilyRef::constant(set_of(d.items[1])); }
  if (d.head_is("eq-fam")) { want(d, "eq-fam", 1); return FamilyRef::eq(set_of(d.items[1])); }
  if (d.head_is("dep-idx-fam")) { want(d, "dep-idx-fam", 1); return FamilyRef::dep_idx(dep_of(d.items[1])); }
  if (d.head_is("table-fam")) {
    want(d, "table-fam", 1);
    if (d.items[1].is_list) throw ParseError("table-fam expects a file name", d.items[1].offset);
    if (!loader) throw ParseError("no table loader available for " + d.items[1].atom, d.offset);
    return loader(d.items[1].atom);
  }
  throw ParseError("unknown family '" + d.to_string() + "'", d.offset);
}

MonadCode code_of(const Datum& d, const TableLoader& loader) {
  if (d.head_is("id")) { want(d, "id", 0); return MonadCode::id(); }
  if (d.head_is("pb")) { want(d, "pb", 2); return MonadCode::pb(code_of(d.items[1], loader), fam_of(d.items[2], loader)); }
  if (d.head_is("slice")) { want(d, "slice", 1); return MonadCode::slice(code_of(d.items[1], loader)); }
  throw ParseError("unknown monad code '" + d.to_string() + "'", d.offset);
}

}  // namespace

MonadCode parse_code(std::string_view text, const TableLoader& loader) { return code_of(sexpr::parse(text), loader); }

FamilyRef parse_family(std::string_view text, const TableLoader& loader) { return fam_of(sexpr::parse(text), loader); }

DepMonadCode parse_dep_code(std::string_view text) { return dep_of(sexpr::parse(text)); }

FiniteSetSpec parse_set(std::string_view text) { return set_of(sexpr::parse(text)); }

Extension parse_extension(std::string_view text, const TableLoader& loader) {
  Datum d = sexpr::parse(text);
  want(d, "ext", 2);
  Extension ext{code_of(d.items[1], loader), dep_of(d.items[2])};
  if (!(base_of(ext.md) == ext.m))
    throw ParseError("dependent code lies over " + base_of(ext.md).to_string() + ", not " + ext.m.to_string(),
                     d.offset);
  return ext;
}

}  // namespace opetopic
