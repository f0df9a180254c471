#pragma once

// Test-side oracles shared by the unit tests and the acceptance binary.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "opetopic/algebra.hpp"
#include "opetopic/code.hpp"
#include "opetopic/value.hpp"

namespace oracle {

using opetopic::MonadCode;
using opetopic::Value;

struct LawTally {
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::string first_failure;
};

// Keyed by law name.
using LawReport = std::map<std::string, LawTally>;

// Decorations of c by constructors with the total size of the
// constructors at most budget.
std::vector<Value> bounded_decorations(const MonadCode& m, const Value& c, std::size_t budget);

// Unit, associativity, typing and position laws, checked pointwise on every
// index, constructor and decoration within bound (composites within bound).
LawReport monad_laws(const MonadCode& m, std::size_t bound);
// Eta has one position; mu-pos is a bijection onto the positions of mu
// with mu-fst / mu-snd its inverse.
LawReport cartesian_laws(const MonadCode& m, std::size_t bound);

std::size_t total_failures(const LawReport& r);
std::size_t total_checked(const LawReport& r);

// Planar trees with n nodes, l leaves and every node of arity at most
// max_arity.  Each input edge of a node holds a leaf or a subtree; the
// empty tree (a lone leaf) has 0 nodes and 1 leaf.
std::size_t planar_trees(std::size_t n, std::size_t l, std::size_t max_arity);

// Associativity on all triples and a two-sided unit, read off the table.
bool is_monoid(const opetopic::MonoidSpec& spec);

struct MultCount {
  std::size_t checked = 0;
  std::size_t failures = 0;
};

// ismult by plain enumeration: every (i, c, nu) from idx_enum / cns_enum
// at bound, counting x in X0 i and witnesses in X1 ((i, x), (c, nu)).
MultCount naive_ismult(const MonadCode& m, const opetopic::FamilyRef& x0, const opetopic::FamilyRef& x1,
                       std::size_t bound);

}  // namespace oracle
