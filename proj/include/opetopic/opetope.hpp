#pragma once

#include <cstddef>
#include <vector>

#include "opetopic/code.hpp"
#include "opetopic/value.hpp"

namespace opetopic {

// Slice^dim Id.
MonadCode opetope_monad(int dim);

struct OpetopeGroup {
  Value index;
  std::vector<Value> shapes;
};

struct OpetopeListing {
  int dim = 0;
  std::size_t bound = 0;
  MonadCode monad = MonadCode::id();
  std::vector<OpetopeGroup> groups;

  std::size_t total() const;
};

// Constructors of Slice^dim Id at each index, both within bound.
OpetopeListing enumerate_opetopes(int dim, std::size_t bound);

}  // namespace opetopic
