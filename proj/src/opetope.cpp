#include "opetopic/opetope.hpp"

#include "opetopic/error.hpp"
#include "opetopic/monad.hpp"

namespace opetopic {

MonadCode opetope_monad(int dim) {
  if (dim < 0) throw EvalError("opetope dimension must be non-negative");
  MonadCode m = MonadCode::id();
  for (int k = 0; k < dim; ++k) m = MonadCode::slice(m);
  return m;
}

std::size_t OpetopeListing::total() const {
  std::size_t n = 0;
  for (const OpetopeGroup& g : groups) n += g.shapes.size();
  return n;
}

OpetopeListing enumerate_opetopes(int dim, std::size_t bound) {
  OpetopeListing out{dim, bound, opetope_monad(dim), {}};
  for (const Value& i : idx_enum(out.monad, bound)) out.groups.push_back({i, cns_enum(out.monad, i, bound)});
  return out;
}

}  // namespace opetopic
