#include "opetopic/monad.hpp"

#include <map>
#include <mutex>
#include <tuple>
#include <unordered_map>

#include "opetopic/dep_monad.hpp"
#include "opetopic/error.hpp"

namespace opetopic {

using VK = ValueKind;

namespace {

void expect_unit(const Value& v, const char* what) {
  if (!v.is(VK::Unit)) throw EvalError(std::string(what) + ": expected tt, got " + v.to_string());
}

void expect_pair(const Value& v, const char* what) {
  if (!v.is(VK::Pair)) throw EvalError(std::string(what) + ": expected a pair, got " + v.to_string());
}

void expect_tree(const Value& v, const char* what) {
  if (!v.is(VK::Leaf) && !v.is(VK::Node)) throw EvalError(std::string(what) + ": expected a tree, got " + v.to_string());
}

// Positions of a slice constructor; they do not depend on the base.
std::vector<Value> tree_positions(const Value& t) {
  expect_tree(t, "pos_enum(slice)");
  if (t.is(VK::Leaf)) return {};
  std::vector<Value> out{Value::here()};
  const Value& eps = t.tree_eps();
  for (std::size_t k = 0; k < eps.dec_size(); ++k)
    for (const Value& q : tree_positions(eps.dec_val(k))) out.push_back(Value::under(eps.dec_key(k), q));
  return out;
}

}  // namespace

void check_dec(const Value& dec, const std::vector<Value>& positions, const char* what) {
  if (!dec.is(VK::Dec)) throw EvalError(std::string(what) + ": expected a decoration, got " + dec.to_string());
  bool ok = dec.dec_size() == positions.size();
  for (std::size_t k = 0; ok && k < positions.size(); ++k) ok = dec.dec_key(k) == positions[k];
  if (!ok) throw EvalError(std::string(what) + ": decoration " + dec.to_string() + " is not total over its positions");
}

std::vector<Value> family_at(const FamilyRef& fam, const Value& idx) {
  switch (fam.kind()) {
    case FamilyKind::Unit: return {Value::unit()};
    case FamilyKind::Const: return fam.set().values();
    case FamilyKind::Table: {
      auto it = fam.table_data().find(idx);
      if (it == fam.table_data().end())
        throw EvalError("index " + idx.to_string() + " is outside the domain of table " + fam.name());
      return it->second;
    }
    case FamilyKind::DepIdx: return didx_enum(fam.dep(), idx);
    case FamilyKind::Fn: return fam.function()(idx);
    case FamilyKind::Eq: {
      if (!idx.is(VK::Pair) || !fam.set().contains(idx.fst()) || !fam.set().contains(idx.snd()))
        throw EvalError("eq-fam over " + fam.set().name + " applied to " + idx.to_string());
      if (idx.fst() == idx.snd()) return {Value::refl()};
      return {};
    }
  }
  return {};
}

std::vector<Value> all_decorations(const std::vector<Value>& positions,
                                   const std::function<std::vector<Value>(const Value&)>& choices) {
  std::vector<std::vector<Value>> opts;
  opts.reserve(positions.size());
  for (const Value& p : positions) {
    opts.push_back(choices(p));
    if (opts.back().empty()) return {};
  }
  std::vector<Value> out;
  std::vector<std::size_t> pick(positions.size(), 0);
  for (;;) {
    std::vector<std::pair<Value, Value>> entries;
    entries.reserve(positions.size());
    for (std::size_t k = 0; k < positions.size(); ++k) entries.emplace_back(positions[k], opts[k][pick[k]]);
    out.push_back(Value::dec(entries));
    std::size_t k = positions.size();
    while (k > 0) {
      --k;
      if (++pick[k] < opts[k].size()) break;
      pick[k] = 0;
      if (k == 0) return out;
    }
    if (positions.empty()) return out;
  }
}

std::size_t cns_size(const MonadCode& m, const Value& c) {
  switch (m.kind()) {
    case MonadKind::Id: return 0;
    case MonadKind::Pb: expect_pair(c, "cns_size"); return cns_size(m.base(), c.fst());
    case MonadKind::Slice: return tree_nodes(c);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Positions and typing

std::vector<Value> pos_enum(const MonadCode& m, const Value& c) {
  switch (m.kind()) {
    case MonadKind::Id:
      expect_unit(c, "pos_enum(id)");
      return {Value::unit()};
    case MonadKind::Pb:
      expect_pair(c, "pos_enum(pb)");
      return pos_enum(m.base(), c.fst());
    case MonadKind::Slice: return tree_positions(c);
  }
  return {};
}

Value typ(const MonadCode& m, const Value& c, const Value& p) {
  switch (m.kind()) {
    case MonadKind::Id:
      expect_unit(c, "typ(id)");
      expect_unit(p, "typ(id) position");
      return Value::unit();
    case MonadKind::Pb:
      expect_pair(c, "typ(pb)");
      return Value::pair(typ(m.base(), c.fst(), p), c.snd().at(p));
    case MonadKind::Slice:
      expect_tree(c, "typ(slice)");
      if (c.is(VK::Node)) {
        if (p.is(VK::Here)) return Value::pair(c.tree_idx(), c.tree_cns());
        if (p.is(VK::Under)) return typ(m, c.tree_eps().at(p.fst()), p.snd());
      }
      throw EvalError("position " + p.to_string() + " does not occur in " + c.to_string());
  }
  return Value::unit();
}

// ---------------------------------------------------------------------------
// Unit

Value eta(const MonadCode& m, const Value& i) {
  switch (m.kind()) {
    case MonadKind::Id:
      expect_unit(i, "eta(id)");
      return Value::unit();
    case MonadKind::Pb:
      expect_pair(i, "eta(pb)");
      return Value::pair(eta(m.base(), i.fst()), eta_dec(m.base(), i.fst(), i.snd()));
    case MonadKind::Slice: {
      expect_pair(i, "eta(slice)");
      const MonadCode& b = m.base();
      const Value& bi = i.fst();
      const Value& c = i.snd();
      auto ps = pos_enum(b, c);
      Value delta = make_dec(ps, [&](const Value& p) { return eta(b, typ(b, c, p)); });
      Value eps = make_dec(ps, [&](const Value& p) { return Value::leaf(typ(b, c, p)); });
      return Value::node(bi, c, delta, eps);
    }
  }
  return Value::unit();
}

Value eta_pos(const MonadCode& m, const Value& i) {
  switch (m.kind()) {
    case MonadKind::Id: return Value::unit();
    case MonadKind::Pb:
      expect_pair(i, "eta_pos(pb)");
      return eta_pos(m.base(), i.fst());
    case MonadKind::Slice: return Value::here();
  }
  return Value::unit();
}

Value eta_dec(const MonadCode& m, const Value& i, const Value& x) {
  return make_dec(pos_enum(m, eta(m, i)), [&](const Value&) { return x; });
}

// ---------------------------------------------------------------------------
// Multiplication

const Value& TrackedMu::position_of(const Value& p, const Value& q) const {
  for (std::size_t k = 0; k < origins.size(); ++k)
    if (origins[k].first == p && origins[k].second == q) return positions[k];
  throw EvalError("no position of the composite comes from (" + p.to_string() + ", " + q.to_string() + ")");
}

const std::pair<Value, Value>& TrackedMu::origin_of(const Value& pos) const {
  for (std::size_t k = 0; k < positions.size(); ++k)
    if (positions[k] == pos) return origins[k];
  throw EvalError("position " + pos.to_string() + " does not occur in " + result.to_string());
}

namespace {

// Where a position of a grafted tree comes from: a node of sigma itself,
// or position r of psi p.
struct GraftOrigin {
  bool from_sigma;
  Value p;
  Value r;
};

struct TrackedGraft {
  Value result;
  std::vector<Value> positions;
  std::vector<GraftOrigin> origins;
};

TrackedGraft graft_tracked(const MonadCode& b, const Value& sigma, const Value& phi, const Value& psi) {
  expect_tree(sigma, "graft");
  if (sigma.is(VK::Leaf)) {
    Value p0 = eta_pos(b, sigma.tree_idx());
    TrackedGraft out{psi.at(p0), {}, {}};
    out.positions = tree_positions(out.result);
    for (const Value& r : out.positions) out.origins.push_back({false, p0, r});
    return out;
  }
  const Value& c = sigma.tree_cns();
  const Value& delta = sigma.tree_delta();
  const Value& eps = sigma.tree_eps();
  TrackedMu comp = mu_tracked(b, c, delta);
  check_dec(phi, comp.positions, "graft phi");
  check_dec(psi, comp.positions, "graft psi");

  std::vector<std::pair<Value, Value>> delta2, eps2;
  std::vector<TrackedGraft> subs;
  for (std::size_t k = 0; k < delta.dec_size(); ++k) {
    const Value& p = delta.dec_key(k);
    const Value& dp = delta.dec_val(k);
    auto qs = pos_enum(b, dp);
    Value phi_p = make_dec(qs, [&](const Value& q) { return phi.at(comp.position_of(p, q)); });
    Value psi_p = make_dec(qs, [&](const Value& q) { return psi.at(comp.position_of(p, q)); });
    delta2.emplace_back(p, mu(b, dp, phi_p));
    subs.push_back(graft_tracked(b, eps.at(p), phi_p, psi_p));
    eps2.emplace_back(p, subs.back().result);
  }
  TrackedGraft out{Value::node(sigma.tree_idx(), c, Value::dec(delta2), Value::dec(eps2)), {}, {}};
  out.positions.push_back(Value::here());
  out.origins.push_back({true, Value::here(), Value()});
  for (std::size_t k = 0; k < subs.size(); ++k) {
    const Value& p = delta.dec_key(k);
    for (std::size_t s = 0; s < subs[k].positions.size(); ++s) {
      out.positions.push_back(Value::under(p, subs[k].positions[s]));
      const GraftOrigin& o = subs[k].origins[s];
      if (o.from_sigma)
        out.origins.push_back({true, Value::under(p, o.p), Value()});
      else
        out.origins.push_back({false, comp.position_of(p, o.p), o.r});
    }
  }
  return out;
}

TrackedMu slice_mu_tracked(const MonadCode& m, const Value& sigma, const Value& phi) {
  const MonadCode& b = m.base();
  expect_tree(sigma, "mu(slice)");
  if (sigma.is(VK::Leaf)) {
    check_dec(phi, {}, "mu(slice)");
    return TrackedMu{sigma, {}, {}};
  }
  check_dec(phi, pos_enum(m, sigma), "mu(slice)");
  const Value& eps = sigma.tree_eps();
  std::vector<TrackedMu> subs;
  std::vector<std::pair<Value, Value>> psi;
  for (std::size_t k = 0; k < eps.dec_size(); ++k) {
    const Value& p = eps.dec_key(k);
    const Value& sub = eps.dec_val(k);
    Value phi_p = make_dec(pos_enum(m, sub), [&](const Value& q) { return phi.at(Value::under(p, q)); });
    subs.push_back(slice_mu_tracked(m, sub, phi_p));
    psi.emplace_back(p, subs.back().result);
  }
  TrackedGraft g = graft_tracked(b, phi.at(Value::here()), sigma.tree_delta(), Value::dec(psi));
  TrackedMu out{g.result, g.positions, {}};
  for (const GraftOrigin& o : g.origins) {
    if (o.from_sigma) {
      out.origins.emplace_back(Value::here(), o.p);
      continue;
    }
    std::size_t k = 0;
    while (eps.dec_key(k) != o.p) ++k;
    const auto& inner = subs[k].origin_of(o.r);
    out.origins.emplace_back(Value::under(o.p, inner.first), inner.second);
  }
  return out;
}

// The entries of phi under p, re-keyed by the position below p.  Keys of
// phi come in canonical order, so the result is canonical too.
Value restrict_under(const Value& phi, const Value& p) {
  std::vector<std::pair<Value, Value>> out;
  for (std::size_t k = 0; k < phi.dec_size(); ++k) {
    const Value& key = phi.dec_key(k);
    if (key.is(VK::Under) && key.fst() == p) out.emplace_back(key.snd(), phi.dec_val(k));
  }
  return Value::dec(out);
}

// graft and slice mu without position tracking.
Value graft_plain(const MonadCode& b, const Value& sigma, const Value& phi, const Value& psi) {
  expect_tree(sigma, "graft");
  if (sigma.is(VK::Leaf)) return psi.at(eta_pos(b, sigma.tree_idx()));
  const Value& c = sigma.tree_cns();
  const Value& delta = sigma.tree_delta();
  const Value& eps = sigma.tree_eps();
  TrackedMu comp = mu_tracked(b, c, delta);
  check_dec(phi, comp.positions, "graft phi");
  check_dec(psi, comp.positions, "graft psi");
  std::vector<std::pair<Value, Value>> delta2, eps2;
  for (std::size_t k = 0; k < delta.dec_size(); ++k) {
    const Value& p = delta.dec_key(k);
    const Value& dp = delta.dec_val(k);
    std::vector<std::pair<Value, Value>> phi_p, psi_p;
    for (const Value& q : pos_enum(b, dp)) {
      std::size_t r = 0;
      while (comp.origins[r].first != p || comp.origins[r].second != q) ++r;
      phi_p.emplace_back(q, phi.dec_val(r));
      psi_p.emplace_back(q, psi.dec_val(r));
    }
    Value phi_v = Value::dec(phi_p);
    delta2.emplace_back(p, mu(b, dp, phi_v));
    eps2.emplace_back(p, graft_plain(b, eps.at(p), phi_v, Value::dec(psi_p)));
  }
  return Value::node(sigma.tree_idx(), c, Value::dec(delta2), Value::dec(eps2));
}

Value slice_mu_plain(const MonadCode& b, const Value& sigma, const Value& phi) {
  if (sigma.is(VK::Leaf)) return sigma;
  const Value& eps = sigma.tree_eps();
  std::vector<std::pair<Value, Value>> psi;
  for (std::size_t k = 0; k < eps.dec_size(); ++k) {
    const Value& p = eps.dec_key(k);
    psi.emplace_back(p, slice_mu_plain(b, eps.dec_val(k), restrict_under(phi, p)));
  }
  return graft_plain(b, phi.at(Value::here()), sigma.tree_delta(), Value::dec(psi));
}

}  // namespace

TrackedMu mu_tracked(const MonadCode& m, const Value& c, const Value& delta) {
  switch (m.kind()) {
    case MonadKind::Id: {
      expect_unit(c, "mu(id)");
      check_dec(delta, {Value::unit()}, "mu(id)");
      Value r = delta.at(Value::unit());
      expect_unit(r, "mu(id) decoration");
      return TrackedMu{r, {Value::unit()}, {{Value::unit(), Value::unit()}}};
    }
    case MonadKind::Pb: {
      expect_pair(c, "mu(pb)");
      const MonadCode& b = m.base();
      auto ps = pos_enum(b, c.fst());
      check_dec(delta, ps, "mu(pb)");
      Value d0 = make_dec(ps, [&](const Value& p) {
        const Value& dp = delta.at(p);
        expect_pair(dp, "mu(pb) decoration");
        return dp.fst();
      });
      TrackedMu base = mu_tracked(b, c.fst(), d0);
      std::vector<std::pair<Value, Value>> nu;
      for (std::size_t k = 0; k < base.positions.size(); ++k) {
        const auto& [p, q] = base.origins[k];
        nu.emplace_back(base.positions[k], delta.at(p).snd().at(q));
      }
      base.result = Value::pair(base.result, Value::dec(nu));
      return base;
    }
    case MonadKind::Slice: return slice_mu_tracked(m, c, delta);
  }
  throw EvalError("unknown monad");
}

Value mu(const MonadCode& m, const Value& c, const Value& delta) {
  switch (m.kind()) {
    case MonadKind::Id:
      expect_unit(c, "mu(id)");
      return delta.at(Value::unit());
    case MonadKind::Slice: {
      expect_tree(c, "mu(slice)");
      check_dec(delta, tree_positions(c), "mu(slice)");
      return slice_mu_plain(m.base(), c, delta);
    }
    case MonadKind::Pb: return mu_tracked(m, c, delta).result;
  }
  throw EvalError("unknown monad");
}

namespace {

// Position operators are usually applied many times to one composite.
const TrackedMu& recent_mu(const MonadCode& m, const Value& c, const Value& delta) {
  struct Entry {
    std::string code;
    Value c, delta;
    TrackedMu mu;
  };
  thread_local std::vector<Entry> recent;
  thread_local std::size_t next = 0;
  for (const Entry& e : recent)
    if (e.c == c && e.delta == delta && e.code == m.key()) return e.mu;
  Entry e{m.key(), c, delta, mu_tracked(m, c, delta)};
  if (recent.size() < 4) {
    recent.push_back(std::move(e));
    return recent.back().mu;
  }
  std::size_t k = next++ % recent.size();
  recent[k] = std::move(e);
  return recent[k].mu;
}

}  // namespace

Value mu_pos(const MonadCode& m, const Value& c, const Value& delta, const Value& p, const Value& q) {
  return recent_mu(m, c, delta).position_of(p, q);
}

Value mu_fst(const MonadCode& m, const Value& c, const Value& delta, const Value& pos) {
  return recent_mu(m, c, delta).origin_of(pos).first;
}

Value mu_snd(const MonadCode& m, const Value& c, const Value& delta, const Value& pos) {
  return recent_mu(m, c, delta).origin_of(pos).second;
}

// ---------------------------------------------------------------------------
// Trees

Value graft(const MonadCode& base, const Value& sigma, const Value& phi, const Value& psi) {
  return graft_tracked(base, sigma, phi, psi).result;
}

Value tree_image(const MonadCode& base, const Value& tree) {
  expect_tree(tree, "tree_image");
  if (tree.is(VK::Leaf)) return eta(base, tree.tree_idx());
  return mu(base, tree.tree_cns(), tree.tree_delta());
}

Value tree_index(const MonadCode& base, const Value& tree) {
  return Value::pair(tree.tree_idx(), tree_image(base, tree));
}

bool is_corolla(const Value& tree) {
  if (!tree.is(VK::Node)) return false;
  const Value& eps = tree.tree_eps();
  for (std::size_t k = 0; k < eps.dec_size(); ++k)
    if (!eps.dec_val(k).is(VK::Leaf)) return false;
  return true;
}

namespace {

struct SizedTree {
  Value tree;
  Value image;
  std::size_t nodes;
};

class TreeGen {
 public:
  TreeGen(const MonadCode& base, std::size_t base_bound, const NodeFilter& filter)
      : base_(base), base_bound_(base_bound), filter_(filter) {}

  // Trees at base index i with at most n nodes.
  const std::vector<SizedTree>& upto(const Value& i, std::size_t n) {
    auto key = std::make_pair(i, n);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<SizedTree> out;
    out.push_back({Value::leaf(i), eta(base_, i), 0});
    if (n > 0) {
      for (const Value& c : cns_enum(base_, i, base_bound_)) {
        if (filter_ && !filter_(i, c)) continue;
        auto ps = pos_enum(base_, c);
        std::vector<SizedTree> chosen;
        children(i, c, ps, 0, n - 1, chosen, out);
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  void children(const Value& i, const Value& c, const std::vector<Value>& ps, std::size_t k, std::size_t budget,
                std::vector<SizedTree>& chosen, std::vector<SizedTree>& out) {
    if (k == ps.size()) {
      std::vector<std::pair<Value, Value>> delta, eps;
      std::size_t nodes = 1;
      for (std::size_t j = 0; j < ps.size(); ++j) {
        delta.emplace_back(ps[j], chosen[j].image);
        eps.emplace_back(ps[j], chosen[j].tree);
        nodes += chosen[j].nodes;
      }
      Value d = Value::dec(delta);
      out.push_back({Value::node(i, c, d, Value::dec(eps)), mu(base_, c, d), nodes});
      return;
    }
    Value ti = typ(base_, c, ps[k]);
    // Copy: upto() may rehash the memo while we recurse.
    std::vector<SizedTree> subs = upto(ti, budget);
    for (const SizedTree& s : subs) {
      chosen.push_back(s);
      children(i, c, ps, k + 1, budget - s.nodes, chosen, out);
      chosen.pop_back();
    }
  }

  struct KeyHash {
    std::size_t operator()(const std::pair<Value, std::size_t>& k) const { return k.first.hash() * 31 + k.second; }
  };

  MonadCode base_;
  std::size_t base_bound_;
  NodeFilter filter_;
  std::unordered_map<std::pair<Value, std::size_t>, std::vector<SizedTree>, KeyHash> memo_;
};

// Slice constructors per (base, index, bound).
// Finders are only used under the lock; enumeration over a sliced base
// re-enters on the same thread, hence the recursive mutex.
struct SliceCache {
  std::recursive_mutex mu;
  std::map<std::tuple<std::string, Value, std::size_t>, std::vector<Value>> trees;
  std::map<std::pair<std::string, std::size_t>, TreeFinder> finders;
};

SliceCache& slice_cache() {
  static SliceCache cache;
  return cache;
}

}  // namespace

std::vector<Value> trees_upto(const MonadCode& base, const Value& i, std::size_t max_nodes, std::size_t base_bound,
                              const NodeFilter& filter) {
  TreeGen gen(base, base_bound, filter);
  std::vector<Value> out;
  for (const SizedTree& t : gen.upto(i, max_nodes)) out.push_back(t.tree);
  return out;
}

namespace {

// Trees under two budgets: nodes and leaves.  The base is cartesian, so
// the image of a tree has exactly one position per leaf; bounding leaves
// bounds the image without building trees whose image is too large.
class LeafBoundedGen {
 public:
  LeafBoundedGen(const MonadCode& base, std::size_t base_bound, const NodeFilter& filter)
      : base_(base), base_bound_(base_bound), filter_(filter) {}

  struct Tree {
    Value tree;
    Value image;
    std::size_t nodes;
    std::size_t leaves;
  };

  // Trees at i with at most n nodes and l leaves.
  const std::vector<Tree>& upto(const Value& i, std::size_t n, std::size_t l) {
    Key key{i, n, l};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<Tree> out;
    if (l > 0) out.push_back({Value::leaf(i), eta(base_, i), 0, 1});
    if (n > 0) {
      for (const Cand& c : cands(i)) {
        if (filter_ && !filter_(i, c.cns)) continue;
        if (c.pos.size() > l + (n - 1)) continue;
        std::vector<const Tree*> chosen;
        children(i, c, 0, n - 1, l, chosen, out);
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  struct Cand {
    Value cns;
    std::vector<Value> pos;
    std::vector<Value> types;
  };

  struct Key {
    Value i;
    std::size_t n, l;
    bool operator==(const Key& o) const { return n == o.n && l == o.l && i == o.i; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return (k.i.hash() * 31 + k.n) * 31 + k.l; }
  };

  const std::vector<Cand>& cands(const Value& i) {
    auto it = cands_.find(i);
    if (it != cands_.end()) return it->second;
    std::vector<Cand> out;
    for (const Value& c : cns_enum(base_, i, base_bound_)) {
      Cand k{c, pos_enum(base_, c), {}};
      for (const Value& p : k.pos) k.types.push_back(typ(base_, c, p));
      out.push_back(std::move(k));
    }
    return cands_.emplace(i, std::move(out)).first->second;
  }

  void children(const Value& i, const Cand& c, std::size_t k, std::size_t n, std::size_t l,
                std::vector<const Tree*>& chosen, std::vector<Tree>& out) {
    if (k == c.pos.size()) {
      std::vector<std::pair<Value, Value>> delta, eps;
      std::size_t nodes = 1, leaves = 0;
      for (std::size_t m = 0; m < k; ++m) {
        delta.emplace_back(c.pos[m], chosen[m]->image);
        eps.emplace_back(c.pos[m], chosen[m]->tree);
        nodes += chosen[m]->nodes;
        leaves += chosen[m]->leaves;
      }
      Value d = Value::dec(delta);
      out.push_back({Value::node(i, c.cns, d, Value::dec(eps)), mu(base_, c.cns, d), nodes, leaves});
      return;
    }
    // Memo entries are stable under rehashing, so holding pointers is fine.
    const std::vector<Tree>& subs = upto(c.types[k], n, l);
    for (const Tree& t : subs) {
      if (t.nodes > n || t.leaves > l) continue;
      chosen.push_back(&t);
      children(i, c, k + 1, n - t.nodes, l - t.leaves, chosen, out);
      chosen.pop_back();
    }
  }

  MonadCode base_;
  std::size_t base_bound_;
  NodeFilter filter_;
  std::unordered_map<Value, std::vector<Cand>, ValueHash> cands_;
  std::unordered_map<Key, std::vector<Tree>, KeyHash> memo_;

 public:
  const MonadCode& base() const { return base_; }
};

struct PairHash {
  std::size_t operator()(const std::pair<Value, std::size_t>& k) const { return k.first.hash() * 31 + k.second; }
};

}  // namespace

struct TreeFinder::Impl {
  LeafBoundedGen gen;
  std::size_t max_nodes;
  // Trees at j with at most l leaves, by image.
  std::unordered_map<std::pair<Value, std::size_t>, std::unordered_map<Value, std::vector<Value>, ValueHash>,
                     PairHash>
      grouped;
};

TreeFinder::TreeFinder(const MonadCode& base, std::size_t max_nodes, std::size_t base_bound, const NodeFilter& filter)
    : impl_(std::make_unique<Impl>(Impl{LeafBoundedGen(base, base_bound, filter), max_nodes, {}})) {}
TreeFinder::~TreeFinder() = default;
TreeFinder::TreeFinder(TreeFinder&&) noexcept = default;

std::vector<Value> TreeFinder::with_image(const Value& j, const Value& d) {
  MonadCode base = impl_->gen.base();
  std::size_t l = pos_enum(base, d).size();
  auto key = std::make_pair(j, l);
  auto it = impl_->grouped.find(key);
  if (it == impl_->grouped.end()) {
    std::unordered_map<Value, std::vector<Value>, ValueHash> g;
    for (const auto& t : impl_->gen.upto(j, impl_->max_nodes, l))
      if (t.leaves == l) g[t.image].push_back(t.tree);
    it = impl_->grouped.emplace(key, std::move(g)).first;
  }
  auto found = it->second.find(d);
  if (found == it->second.end()) return {};
  return found->second;
}

std::vector<Value> trees_with_image(const MonadCode& base, const Value& j, const Value& d, std::size_t max_nodes,
                                    std::size_t base_bound, const NodeFilter& filter) {
  return TreeFinder(base, max_nodes, base_bound, filter).with_image(j, d);
}

namespace {

std::vector<Value> directed_trees(const MonadCode& base, const Value& i, std::size_t bound) {
  SliceCache& cache = slice_cache();
  std::lock_guard<std::recursive_mutex> lock(cache.mu);
  auto key = std::make_tuple(base.key(), i, bound);
  auto it = cache.trees.find(key);
  if (it != cache.trees.end()) return it->second;
  auto fkey = std::make_pair(base.key(), bound);
  auto f = cache.finders.find(fkey);
  if (f == cache.finders.end()) f = cache.finders.emplace(fkey, TreeFinder(base, bound, bound)).first;
  auto trees = f->second.with_image(i.fst(), i.snd());
  return cache.trees.emplace(key, std::move(trees)).first->second;
}

}  // namespace

void clear_enumeration_cache() {
  std::lock_guard<std::recursive_mutex> lock(slice_cache().mu);
  slice_cache().trees.clear();
  slice_cache().finders.clear();
}

// ---------------------------------------------------------------------------
// Enumeration

std::vector<Value> idx_enum(const MonadCode& m, std::size_t bound) {
  switch (m.kind()) {
    case MonadKind::Id: return {Value::unit()};
    case MonadKind::Pb: {
      std::vector<Value> out;
      for (const Value& i : idx_enum(m.base(), bound))
        for (const Value& x : family_at(m.family(), i)) out.push_back(Value::pair(i, x));
      return out;
    }
    case MonadKind::Slice: {
      std::vector<Value> out;
      for (const Value& i : idx_enum(m.base(), bound))
        for (const Value& c : cns_enum(m.base(), i, bound)) out.push_back(Value::pair(i, c));
      return out;
    }
  }
  return {};
}

std::vector<Value> cns_enum(const MonadCode& m, const Value& i, std::size_t bound) {
  switch (m.kind()) {
    case MonadKind::Id:
      expect_unit(i, "cns_enum(id)");
      return {Value::unit()};
    case MonadKind::Pb: {
      expect_pair(i, "cns_enum(pb)");
      const MonadCode& b = m.base();
      std::vector<Value> out;
      for (const Value& c : cns_enum(b, i.fst(), bound)) {
        auto decs = all_decorations(pos_enum(b, c),
                                    [&](const Value& p) { return family_at(m.family(), typ(b, c, p)); });
        for (Value& nu : decs) out.push_back(Value::pair(c, std::move(nu)));
      }
      return out;
    }
    case MonadKind::Slice: {
      expect_pair(i, "cns_enum(slice)");
      return directed_trees(m.base(), i, bound);
    }
  }
  return {};
}

}  // namespace opetopic
