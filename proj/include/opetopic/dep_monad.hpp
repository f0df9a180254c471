#pragma once

#include <cstddef>
#include <vector>

#include "opetopic/code.hpp"
#include "opetopic/value.hpp"

namespace opetopic {

// Operations of a dependent monad md over m = base_of(md).  Arguments
// named i, c, delta are base values; jd, cd, dd their dependent
// counterparts lying over them.

std::vector<Value> didx_enum(const DepMonadCode& md, const Value& i);
std::vector<Value> dcns_enum(const DepMonadCode& md, const Value& i, const Value& jd, const Value& c);
Value dtyp(const DepMonadCode& md, const Value& i, const Value& jd, const Value& c, const Value& cd,
           const Value& p);
Value deta(const DepMonadCode& md, const Value& i, const Value& jd);
// Constant decoration on the positions of eta(m, i) with value x.
Value deta_dec(const DepMonadCode& md, const Value& i, const Value& x);
Value dmu(const DepMonadCode& md, const Value& i, const Value& jd, const Value& c, const Value& cd,
          const Value& delta, const Value& dd);

// Erases fibers: the base value a dependent constructor lies over must be
// `c`.  Returns true when cd has the shape of c (positionwise for trees).
bool lies_over(const DepMonadCode& md, const Value& cd, const Value& c);

// (Slice (Pb m (Idx-down md)), Slice-down (Pb-down md eq)).
Extension next_extension(const Extension& ext);
// n-th iterate of next_extension.
Extension tower(const Extension& ext, int n);
// X_n of the opetopic type over ext: Idx-down of the n-th iterate.
FamilyRef over_optype_family(const Extension& ext, int n);

}  // namespace opetopic
