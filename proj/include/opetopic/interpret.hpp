#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

#include "opetopic/code.hpp"
#include "opetopic/term.hpp"
#include "opetopic/value.hpp"

namespace opetopic {

using Env = std::map<std::string, Value>;

// Evaluates t over the concrete monad m.  Mu / Eta / Typ and the position
// operators map to their concrete counterparts; a Lam in decoration
// position is tabulated over the positions of the constructor it
// decorates.  Throws EvalError on an unbound variable, a value in the
// wrong role, or a position used outside its constructor.
Value interpret_term(const MonadCode& m, const Env& env, const Term& t);

// Whether v can play the role of sort s over m (shape check only).
bool has_role(const MonadCode& m, Sort s, const Value& v);

struct ClosedTerm {
  Term term;
  Env env;
  Value value;
};

// Deterministic random term that is well typed over m under its
// environment: every position is used with the constructor it belongs to
// and every decoration is total.  Top-level sort is idx, cns, pos or
// opaque by seed.  Constructor values are drawn from the enumerations at
// the given bound.
ClosedTerm random_closed_term(const MonadCode& m, std::size_t bound, int depth, std::uint64_t seed);

}  // namespace opetopic
