#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "opetopic/value.hpp"

namespace opetopic {

struct FiniteSetSpec {
  std::string name;
  std::vector<std::string> elements;

  std::vector<Value> values() const;
  bool contains(const Value& v) const;
  std::string to_string() const;  // (set NAME a b ...)
};

// Throws EvalError on empty or duplicate names.
FiniteSetSpec make_set(std::string name, std::vector<std::string> elements);

class DepMonadCode;

using FamilyTable = std::unordered_map<Value, std::vector<Value>, ValueHash>;

enum class FamilyKind { Unit, Const, Table, DepIdx, Fn, Eq };

// A finite-set-valued family over the indices of some monad.
//   Unit    every fiber is [tt]
//   Const   every fiber is the carrier
//   Table   explicit fibers; indices outside the table are an error
//   DepIdx  the fiber at i is Idx-down of a dependent code at i
//   Fn      computed fibers (used for derived families such as a monoid's
//           multiplication graph)
//   Eq      at (pair a b) with a, b in the carrier: [refl] if a == b, else []
class FamilyRef {
 public:
  using Fn = std::function<std::vector<Value>(const Value&)>;

  static FamilyRef unit();
  static FamilyRef constant(FiniteSetSpec set);
  static FamilyRef table(std::string name, FamilyTable table);
  static FamilyRef dep_idx(const DepMonadCode& dep);
  static FamilyRef fn(std::string name, Fn f);
  static FamilyRef eq(FiniteSetSpec set);

  FamilyKind kind() const;
  const FiniteSetSpec& set() const;
  const FamilyTable& table_data() const;
  const DepMonadCode& dep() const;
  const Fn& function() const;
  const std::string& name() const;

  std::string to_string() const;
  std::string key() const;

 private:
  struct Rep;
  explicit FamilyRef(std::shared_ptr<const Rep> r) : rep_(std::move(r)) {}
  std::shared_ptr<const Rep> rep_;
};

enum class MonadKind { Id, Pb, Slice };

class MonadCode {
 public:
  static MonadCode id();
  static MonadCode pb(MonadCode base, FamilyRef fam);
  static MonadCode slice(MonadCode base);

  MonadKind kind() const { return rep_->kind; }
  const MonadCode& base() const;
  const FamilyRef& family() const;
  const std::string& to_string() const { return rep_->text; }
  // Memoisation key: the text, with table and computed families made
  // unique per instance.
  const std::string& key() const { return rep_->key; }
  int depth() const { return rep_->depth; }

  friend bool operator==(const MonadCode& a, const MonadCode& b) { return a.key() == b.key(); }

 private:
  struct Rep {
    MonadKind kind;
    std::shared_ptr<const MonadCode> base;
    std::shared_ptr<const FamilyRef> fam;
    std::string text;
    std::string key;
    int depth;
  };
  explicit MonadCode(std::shared_ptr<const Rep> r) : rep_(std::move(r)) {}
  std::shared_ptr<const Rep> rep_;
};

// Family over (pair j x) used by a dependent pullback.  Eq is the
// identity family j == x; Table gives the fibers explicitly.
struct DepFamily {
  bool is_eq = true;
  std::string name;
  FamilyTable table;
};

enum class DepKind { Id, Pb, Slice };

class DepMonadCode {
 public:
  static DepMonadCode id(FiniteSetSpec carrier);
  static DepMonadCode pb(DepMonadCode base, DepFamily fam = {});
  static DepMonadCode slice(DepMonadCode base);

  DepKind kind() const { return rep_->kind; }
  const DepMonadCode& base() const;
  const FiniteSetSpec& carrier() const { return rep_->carrier; }
  const DepFamily& family() const { return rep_->fam; }
  const std::string& to_string() const { return rep_->text; }
  const std::string& key() const { return rep_->key; }

  friend bool operator==(const DepMonadCode& a, const DepMonadCode& b) { return a.key() == b.key(); }

 private:
  struct Rep {
    DepKind kind;
    std::shared_ptr<const DepMonadCode> base;
    FiniteSetSpec carrier;
    DepFamily fam;
    std::string text;
    std::string key;
  };
  explicit DepMonadCode(std::shared_ptr<const Rep> r) : rep_(std::move(r)) {}
  std::shared_ptr<const Rep> rep_;
};

// The monad a dependent code lies over.
MonadCode base_of(const DepMonadCode& md);

struct Extension {
  MonadCode m;
  DepMonadCode md;
};

// Loads (table-fam FILE) operands.
using TableLoader = std::function<FamilyRef(const std::string& file)>;

// Grammar:
//   CODE ::= (id) | (pb CODE FAM) | (slice CODE)
//   FAM  ::= (unit-fam) | (const-fam SET) | (table-fam FILE) | (eq-fam SET) | (dep-idx-fam DEP)
//   SET  ::= (set NAME elem ...)
//   DEP  ::= (id-dep SET) | (pb-dep DEP eq) | (slice-dep DEP)
//   EXT  ::= (ext CODE DEP)
MonadCode parse_code(std::string_view text, const TableLoader& loader = {});
FamilyRef parse_family(std::string_view text, const TableLoader& loader = {});
DepMonadCode parse_dep_code(std::string_view text);
Extension parse_extension(std::string_view text, const TableLoader& loader = {});
FiniteSetSpec parse_set(std::string_view text);

}  // namespace opetopic
