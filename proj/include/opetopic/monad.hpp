#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "opetopic/code.hpp"
#include "opetopic/value.hpp"

namespace opetopic {

// Fiber of a family at an index.  Throws EvalError for a Table lookup
// outside its domain or an Eq lookup on a malformed index.
std::vector<Value> family_at(const FamilyRef& fam, const Value& idx);

// Constructor size: 0 for Id, the base size for Pb, node count for trees.
std::size_t cns_size(const MonadCode& m, const Value& c);

std::vector<Value> idx_enum(const MonadCode& m, std::size_t bound);
std::vector<Value> cns_enum(const MonadCode& m, const Value& i, std::size_t bound);
std::vector<Value> pos_enum(const MonadCode& m, const Value& c);

Value typ(const MonadCode& m, const Value& c, const Value& p);
Value eta(const MonadCode& m, const Value& i);
Value eta_pos(const MonadCode& m, const Value& i);
// Constant decoration with value x on the positions of eta(m, i).
Value eta_dec(const MonadCode& m, const Value& i, const Value& x);
Value mu(const MonadCode& m, const Value& c, const Value& delta);
Value mu_pos(const MonadCode& m, const Value& c, const Value& delta, const Value& p, const Value& q);
Value mu_fst(const MonadCode& m, const Value& c, const Value& delta, const Value& pos);
Value mu_snd(const MonadCode& m, const Value& c, const Value& delta, const Value& pos);

// mu together with, for each position of the result in canonical order,
// the pair (p, q) it comes from.
struct TrackedMu {
  Value result;
  std::vector<Value> positions;
  std::vector<std::pair<Value, Value>> origins;

  const Value& position_of(const Value& p, const Value& q) const;
  const std::pair<Value, Value>& origin_of(const Value& pos) const;
};
TrackedMu mu_tracked(const MonadCode& m, const Value& c, const Value& delta);

// Slice helpers; `base` is the monad being sliced.
//
// graft(base, sigma, phi, psi): sigma a tree at (i, c), phi a decoration of
// c by constructors, psi p a tree at (typ c p, phi p).  Returns the tree at
// (i, mu c phi) obtained by attaching psi p at the leaf p of sigma.
Value graft(const MonadCode& base, const Value& sigma, const Value& phi, const Value& psi);
// Image of a tree under iterated multiplication.
Value tree_image(const MonadCode& base, const Value& tree);
// The slice index (pair i image) a tree lives at.
Value tree_index(const MonadCode& base, const Value& tree);
bool is_corolla(const Value& tree);

// Decides whether a node with base index i and constructor c may occur.
using NodeFilter = std::function<bool(const Value& i, const Value& c)>;

// Every tree over `base` rooted at base index i with at most max_nodes
// nodes, each node constructor drawn from cns_enum(base, _, base_bound)
// and accepted by the filter.  Unfiltered results are cached.
std::vector<Value> trees_upto(const MonadCode& base, const Value& i, std::size_t max_nodes,
                              std::size_t base_bound, const NodeFilter& filter = {});

// The trees of trees_upto(base, j, ...) whose image is d, found by
// splitting d rather than by filtering.  d must have at most base_bound
// positions for the result to agree with the filtered enumeration.
std::vector<Value> trees_with_image(const MonadCode& base, const Value& j, const Value& d, std::size_t max_nodes,
                                    std::size_t base_bound, const NodeFilter& filter = {});

// trees_with_image with its memo kept between calls.  Not thread-safe.
class TreeFinder {
 public:
  TreeFinder(const MonadCode& base, std::size_t max_nodes, std::size_t base_bound, const NodeFilter& filter = {});
  ~TreeFinder();
  TreeFinder(TreeFinder&&) noexcept;
  std::vector<Value> with_image(const Value& j, const Value& d);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Every decoration of `positions` with the value at p drawn from choices(p),
// in lexicographic order of the choice lists.
std::vector<Value> all_decorations(const std::vector<Value>& positions,
                                   const std::function<std::vector<Value>(const Value&)>& choices);

// Throws EvalError unless dec is a decoration keyed by exactly `positions`.
void check_dec(const Value& dec, const std::vector<Value>& positions, const char* what);

void clear_enumeration_cache();

}  // namespace opetopic
