#include "opetopic/algebra.hpp"

#include <algorithm>
#include <future>
#include <unordered_map>

#include "opetopic/dep_monad.hpp"
#include "opetopic/error.hpp"
#include "opetopic/monad.hpp"

namespace opetopic {

using VK = ValueKind;

MonadCode FamilyStack::monad(std::size_t k) const {
  if (k > families.size()) throw EvalError("family stack has no monad at level " + std::to_string(k));
  MonadCode m = m0;
  for (std::size_t j = 0; j < k; ++j) m = MonadCode::slice(MonadCode::pb(m, families[j]));
  return m;
}

namespace {

// Runs f(item, worker) on each item, possibly on several threads, and
// returns the results in item order.
template <class T, class F>
auto ordered_map(const std::vector<T>& items, unsigned jobs, F f) -> std::vector<decltype(f(items[0], 0u))> {
  using R = decltype(f(items[0], 0u));
  std::vector<R> out(items.size());
  if (jobs <= 1 || items.size() <= 1) {
    for (std::size_t k = 0; k < items.size(); ++k) out[k] = f(items[k], 0u);
    return out;
  }
  unsigned n = static_cast<unsigned>(std::min<std::size_t>(jobs, items.size()));
  std::vector<std::future<void>> workers;
  for (unsigned w = 0; w < n; ++w)
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t k = w; k < items.size(); k += n) out[k] = f(items[k], w);
    }));
  for (auto& w : workers) w.get();
  return out;
}

unsigned worker_count(const Bounds& b) { return b.jobs == 0 ? 1 : b.jobs; }

void record(CheckReport& r, Counterexample cx, const Bounds& b) {
  r.holds = false;
  ++r.failures;
  if (r.counterexamples.size() < b.max_counterexamples) r.counterexamples.push_back(std::move(cx));
}

CheckReport merge(const std::vector<CheckReport>& parts, const Bounds& b) {
  CheckReport out;
  for (const CheckReport& p : parts) {
    out.checked += p.checked;
    out.failures += p.failures;
    for (const Counterexample& cx : p.counterexamples)
      if (out.counterexamples.size() < b.max_counterexamples) out.counterexamples.push_back(cx);
  }
  out.holds = out.failures == 0;
  return out;
}

bool has_fiber(const FamilyRef& x, const Value& idx) {
  try {
    return !family_at(x, idx).empty();
  } catch (const EvalError&) {
    return true;  // let the check itself report the lookup failure
  }
}

// Constructors at i within bounds.  Over a slice, nodes whose fiber in x0
// is empty cannot be decorated and are pruned; finders holds one tree
// finder per worker.
std::vector<Value> decoratable_cns(const MonadCode& m, const FamilyRef& x0, const Value& i, std::size_t size,
                                   std::vector<std::optional<TreeFinder>>& finders, unsigned worker) {
  if (m.kind() == MonadKind::Slice && pos_enum(m.base(), i.snd()).size() <= size) {
    auto& f = finders[worker];
    if (!f) {
      NodeFilter keep = [x0](const Value& j, const Value& c) { return has_fiber(x0, Value::pair(j, c)); };
      f.emplace(m.base(), size, size, keep);
    }
    return f->with_image(i.fst(), i.snd());
  }
  return cns_enum(m, i, size);
}

std::vector<Value> family_decorations(const MonadCode& m, const FamilyRef& x0, const Value& c) {
  return all_decorations(pos_enum(m, c), [&](const Value& p) { return family_at(x0, typ(m, c, p)); });
}

// (x, w) pairs over (i, c, nu).
std::vector<std::pair<Value, Value>> fiber(const FamilyRef& x0, const FamilyRef& x1, const Value& i, const Value& c,
                                           const Value& nu) {
  std::vector<std::pair<Value, Value>> out;
  Value pc = Value::pair(c, nu);
  for (const Value& x : family_at(x0, i))
    for (const Value& w : family_at(x1, Value::pair(Value::pair(i, x), pc))) out.emplace_back(x, w);
  return out;
}

std::string triple(const Value& i, const Value& c, const Value& nu) {
  return "(" + i.to_string() + ", " + c.to_string() + ", " + nu.to_string() + ")";
}

std::pair<Value, Value> center(const FamilyRef& x0, const FamilyRef& x1, const Value& i, const Value& c,
                                     const Value& nu) {
  auto f = fiber(x0, x1, i, c, nu);
  if (f.size() != 1)
    throw EvalError("fiber over " + triple(i, c, nu) + " has " + std::to_string(f.size()) + " elements");
  return f.front();
}

}  // namespace

MultReport ismult_check(const MonadCode& m, const FamilyRef& x0, const FamilyRef& x1, const Bounds& b) {
  std::vector<std::optional<TreeFinder>> finders(worker_count(b));
  auto parts = ordered_map(idx_enum(m, b.size), worker_count(b), [&](const Value& i, unsigned w) {
    CheckReport r;
    for (const Value& c : decoratable_cns(m, x0, i, b.size, finders, w))
      for (const Value& nu : family_decorations(m, x0, c)) {
        ++r.checked;
        std::size_t n = 0;
        try {
          n = fiber(x0, x1, i, c, nu).size();
        } catch (const EvalError& e) {
          record(r, {i, c, nu, 0, e.what()}, b);
          continue;
        }
        if (n != 1) record(r, {i, c, nu, n, ""}, b);
      }
    return r;
  });
  return merge(parts, b);
}

Value alpha(const MonadCode&, const FamilyRef& x0, const FamilyRef& x1, const Value& i, const Value& c,
            const Value& nu) {
  return center(x0, x1, i, c, nu).first;
}

Value alpha_wit(const MonadCode&, const FamilyRef& x0, const FamilyRef& x1, const Value& i, const Value& c,
                const Value& nu) {
  return center(x0, x1, i, c, nu).second;
}

Value eta_alg(const MonadCode& m, const FamilyRef& x0, const FamilyRef& x1, const FamilyRef& x2, const Value& i,
              const Value& x) {
  MonadCode pb = MonadCode::pb(m, x0);
  Value j = Value::pair(i, x);
  Value idx = Value::pair(j, eta(pb, j));
  return alpha(MonadCode::slice(pb), x1, x2, idx, Value::leaf(j), Value::dec({}));
}

Value mu_alg(const MonadCode& m, const FamilyRef& x0, const FamilyRef& x1, const FamilyRef& x2, const Value& i,
             const Value& c, const Value& nu, const Value& delta, const Value& x0v, const Value& x1v,
             const Value& xbar) {
  MonadCode pb = MonadCode::pb(m, x0);
  MonadCode m1 = MonadCode::slice(pb);
  Value pc = Value::pair(c, nu);
  Value root = Value::pair(i, x0v);
  auto ps = pos_enum(pb, pc);
  check_dec(delta, ps, "mu_alg delta");
  check_dec(xbar, ps, "mu_alg xbar");
  Value eps = make_dec(ps, [&](const Value& p) { return eta(m1, Value::pair(typ(pb, pc, p), delta.at(p))); });
  Value sigma = Value::node(root, pc, delta, eps);
  Value theta = make_dec(pos_enum(m1, sigma), [&](const Value& q) { return q.is(VK::Here) ? x1v : xbar.at(q.fst()); });
  return alpha(m1, x1, x2, Value::pair(root, mu(pb, pc, delta)), sigma, theta);
}

CheckReport check_unit_coherence(const FamilyStack& s, const Bounds& b) {
  if (s.families.size() < 2) throw EvalError("unit coherence needs X0 and X1");
  const MonadCode& m = s.m0;
  const FamilyRef& x0 = s.families[0];
  const FamilyRef& x1 = s.families[1];
  const FamilyRef* x2 = s.families.size() > 2 ? &s.families[2] : nullptr;
  CheckReport r;
  for (const Value& i : idx_enum(m, b.size)) {
    Value c = eta(m, i);
    for (const Value& x : family_at(x0, i)) {
      ++r.checked;
      Value nu = eta_dec(m, i, x);
      try {
        Value a = alpha(m, x0, x1, i, c, nu);
        if (a != x) {
          record(r, {i, c, nu, 1, "alpha gives " + a.to_string() + ", expected " + x.to_string()}, b);
          continue;
        }
        if (x2) {
          Value w = eta_alg(m, x0, x1, *x2, i, x);
          if (w != alpha_wit(m, x0, x1, i, c, nu))
            record(r, {i, c, nu, 1, "eta_alg gives " + w.to_string() + ", not the centre's witness"}, b);
        }
      } catch (const EvalError& e) {
        record(r, {i, c, nu, 0, e.what()}, b);
      }
    }
  }
  return r;
}

namespace {

// Decorations delta of c by constructors whose sizes sum to at most budget.
void bounded_decorations(const MonadCode& m, const Value& c, const std::vector<Value>& ps, std::size_t k,
                         std::size_t budget, std::size_t size, std::vector<std::pair<Value, Value>>& acc,
                         std::vector<Value>& out) {
  if (k == ps.size()) {
    out.push_back(Value::dec(acc));
    return;
  }
  for (const Value& e : cns_enum(m, typ(m, c, ps[k]), size)) {
    std::size_t n = cns_size(m, e);
    if (n > budget) continue;
    acc.emplace_back(ps[k], e);
    bounded_decorations(m, c, ps, k + 1, budget - n, size, acc, out);
    acc.pop_back();
  }
}

}  // namespace

CheckReport check_mu_coherence(const FamilyStack& s, const Bounds& b) {
  if (s.families.size() < 2) throw EvalError("mu coherence needs X0 and X1");
  const MonadCode& m = s.m0;
  const FamilyRef& x0 = s.families[0];
  const FamilyRef& x1 = s.families[1];
  const FamilyRef* x2 = s.families.size() > 2 ? &s.families[2] : nullptr;

  auto parts = ordered_map(idx_enum(m, b.size), worker_count(b), [&](const Value& i, unsigned) {
    CheckReport r;
    for (const Value& c : cns_enum(m, i, b.size)) {
      auto ps = pos_enum(m, c);
      std::vector<Value> deltas;
      std::vector<std::pair<Value, Value>> acc;
      bounded_decorations(m, c, ps, 0, b.size, b.size, acc, deltas);
      for (const Value& delta : deltas) {
        TrackedMu comp = mu_tracked(m, c, delta);
        for (const Value& nu2 : family_decorations(m, x0, comp.result)) {
          ++r.checked;
          try {
            std::vector<std::pair<Value, Value>> inner, wits, pbdelta;
            for (const Value& p : ps) {
              const Value& dp = delta.at(p);
              Value nup = make_dec(pos_enum(m, dp), [&](const Value& q) { return nu2.at(comp.position_of(p, q)); });
              Value tp = typ(m, c, p);
              inner.emplace_back(p, alpha(m, x0, x1, tp, dp, nup));
              if (x2) wits.emplace_back(p, alpha_wit(m, x0, x1, tp, dp, nup));
              pbdelta.emplace_back(p, Value::pair(dp, nup));
            }
            Value nu = Value::dec(inner);
            Value lhs = alpha(m, x0, x1, i, comp.result, nu2);
            Value rhs = alpha(m, x0, x1, i, c, nu);
            if (lhs != rhs) {
              record(r, {i, comp.result, nu2, 1, "alpha of the composite is " + lhs.to_string() +
                                                     ", iterated alpha is " + rhs.to_string()},
                     b);
              continue;
            }
            if (x2) {
              Value w = mu_alg(m, x0, x1, *x2, i, c, nu, Value::dec(pbdelta), rhs, alpha_wit(m, x0, x1, i, c, nu),
                               Value::dec(wits));
              if (w != alpha_wit(m, x0, x1, i, comp.result, nu2))
                record(r, {i, comp.result, nu2, 1, "mu_alg gives " + w.to_string() + ", not the centre's witness"},
                       b);
            }
          } catch (const EvalError& e) {
            record(r, {i, comp.result, nu2, 0, e.what()}, b);
          }
        }
      }
    }
    return r;
  });
  return merge(parts, b);
}

AlgReport isalgebraic_check(const Extension& ext, const Bounds& b) {
  const MonadCode& m = ext.m;
  const DepMonadCode& md = ext.md;
  auto parts = ordered_map(idx_enum(m, b.size), worker_count(b), [&](const Value& i, unsigned) {
    CheckReport r;
    auto jds = didx_enum(md, i);
    for (const Value& c : cns_enum(m, i, b.size)) {
      auto ps = pos_enum(m, c);
      // Number of lifts per typing decoration.
      std::unordered_map<Value, std::size_t, ValueHash> lifts;
      for (const Value& jd : jds)
        for (const Value& cd : dcns_enum(md, i, jd, c))
          ++lifts[make_dec(ps, [&](const Value& p) { return dtyp(md, i, jd, c, cd, p); })];
      auto nus = all_decorations(ps, [&](const Value& p) { return didx_enum(md, typ(m, c, p)); });
      for (const Value& nu : nus) {
        ++r.checked;
        auto it = lifts.find(nu);
        std::size_t n = it == lifts.end() ? 0 : it->second;
        if (n != 1) record(r, {i, c, nu, n, ""}, b);
      }
    }
    return r;
  });
  return merge(parts, b);
}

namespace {

struct SubLift {
  Value image;  // dependent constructor over the image of the subtree
  Value tree;
};

class Lifter {
 public:
  explicit Lifter(const Extension& ext) : ext_(checked(ext)), b_(ext.m.base()), d_(ext.md.base()) {}

  LiftResult run(const Value& sigma, const Value& phi) {
    check_dec(phi, pos_enum(ext_.m, sigma), "pushforward_lift phi");
    Value idx = tree_index(b_, sigma);
    Value jd = sigma.is(VK::Leaf) ? Value::pair(sigma.tree_idx().snd(), Value::refl())
                                  : phi.at(Value::here()).fst();
    SubLift s = lift(sigma, phi, jd);
    LiftResult out{Value::pair(jd, s.image), s.tree, true};
    for (const Value& p : pos_enum(ext_.m, sigma))
      if (dtyp(ext_.md, idx, out.omega, sigma, out.sigma_down, p) != phi.at(p)) out.zeta = false;
    return out;
  }

 private:
  // The lift of a subtree whose root must lie over jd.
  SubLift lift(const Value& sigma, const Value& phi, const Value& jd) {
    const Value& j = sigma.tree_idx();
    if (sigma.is(VK::Leaf)) return {deta(d_, j, jd), Value::leaf_down(jd)};
    if (!sigma.is(VK::Node)) throw EvalError("pushforward_lift: not a tree: " + sigma.to_string());
    const Value& c = sigma.tree_cns();
    const Value& here = phi.at(Value::here());
    if (!here.is(VK::Pair) || here.fst() != jd)
      throw EvalError("pushforward_lift: phi at the node over " + j.to_string() + " is " + here.to_string() +
                      ", which does not lie over " + jd.to_string());
    const Value& cd = here.snd();
    auto cds = dcns_enum(d_, j, jd, c);
    if (std::find(cds.begin(), cds.end(), cd) == cds.end())
      throw EvalError("pushforward_lift: " + cd.to_string() + " does not lie over " + c.to_string());
    std::vector<std::pair<Value, Value>> dd, ed;
    for (const Value& p : pos_enum(b_, c)) {
      const Value& sub = sigma.tree_eps().at(p);
      Value sub_phi = make_dec(pos_enum(ext_.m, sub), [&](const Value& q) { return phi.at(Value::under(p, q)); });
      SubLift s = lift(sub, sub_phi, dtyp(d_, j, jd, c, cd, p));
      dd.emplace_back(p, s.image);
      ed.emplace_back(p, s.tree);
    }
    Value ddv = Value::dec(dd);
    return {dmu(d_, j, jd, c, cd, sigma.tree_delta(), ddv), Value::node_down(jd, cd, ddv, Value::dec(ed))};
  }

  static const Extension& checked(const Extension& ext) {
    if (ext.m.kind() != MonadKind::Slice || ext.m.base().kind() != MonadKind::Pb ||
        ext.md.kind() != DepKind::Slice || ext.md.base().kind() != DepKind::Pb)
      throw EvalError("pushforward_lift needs a sliced extension, got " + ext.m.to_string());
    if (!ext.md.base().family().is_eq)
      throw EvalError("pushforward_lift needs the identity family in " + ext.md.to_string());
    return ext;
  }

  Extension ext_;
  MonadCode b_;
  DepMonadCode d_;
};

}  // namespace

LiftResult pushforward_lift(const Extension& ext, const Value& sigma, const Value& phi) {
  Lifter l(ext);
  LiftResult r = l.run(sigma, phi);
  if (!r.zeta) throw EvalError("pushforward_lift: typing of the lift disagrees with phi on " + sigma.to_string());
  return r;
}

std::vector<LiftResult> brute_force_lifts(const Extension& ext, const Value& sigma, const Value& phi) {
  Value idx = tree_index(ext.m.base(), sigma);
  auto ps = pos_enum(ext.m, sigma);
  std::vector<LiftResult> out;
  for (const Value& omega : didx_enum(ext.md, idx))
    for (const Value& sd : dcns_enum(ext.md, idx, omega, sigma)) {
      bool ok = std::all_of(ps.begin(), ps.end(),
                            [&](const Value& p) { return dtyp(ext.md, idx, omega, sigma, sd, p) == phi.at(p); });
      if (ok) out.push_back({omega, sd, true});
    }
  return out;
}

FibrancyReport fibrancy_check(const FamilyStack& s, int levels, const Bounds& b, bool pre_cat) {
  if (levels < 1) throw EvalError("fibrancy_check needs at least one level");
  if (s.families.size() <= static_cast<std::size_t>(levels))
    throw EvalError("family stack has " + std::to_string(s.families.size()) + " families, level " +
                    std::to_string(levels) + " needs " + std::to_string(levels + 1));
  FibrancyReport r;
  r.first_level = pre_cat ? 2 : 1;
  for (int k = r.first_level; k <= levels; ++k) {
    r.levels.push_back(ismult_check(s.monad(k - 1), s.families[k - 1], s.families[k], b));
    if (!r.levels.back().holds) r.holds = false;
  }
  return r;
}

FamilyStack over_optype_stack(const Extension& ext, int levels) {
  FamilyStack s{ext.m, {}};
  for (int k = 0; k <= levels; ++k) s.families.push_back(over_optype_family(ext, k));
  return s;
}

std::string MonoidSpec::product(const std::string& a, const std::string& b) const {
  auto at = [&](const std::string& x) {
    auto it = std::find(carrier.elements.begin(), carrier.elements.end(), x);
    if (it == carrier.elements.end()) throw EvalError(x + " is not an element of " + carrier.name);
    return static_cast<std::size_t>(it - carrier.elements.begin());
  };
  return mul.at(at(a)).at(at(b));
}

std::string MonoidSpec::fold(const std::vector<std::string>& xs) const {
  std::string acc = unit;
  for (const std::string& x : xs) acc = product(acc, x);
  return acc;
}

void validate(const MonoidSpec& spec) {
  const auto& el = spec.carrier.elements;
  auto member = [&](const std::string& x) { return std::find(el.begin(), el.end(), x) != el.end(); };
  if (!member(spec.unit)) throw EvalError("unit " + spec.unit + " is not an element of " + spec.carrier.name);
  if (spec.mul.size() != el.size()) throw EvalError("multiplication table must have one row per element");
  for (std::size_t a = 0; a < el.size(); ++a) {
    if (spec.mul[a].size() != el.size()) throw EvalError("row " + el[a] + " of the multiplication table is not total");
    for (const std::string& c : spec.mul[a])
      if (!member(c)) throw EvalError("product " + c + " in row " + el[a] + " is not an element");
  }
}

MonoidSpec cyclic_monoid(std::size_t n) {
  std::vector<std::string> el;
  for (std::size_t k = 0; k < n; ++k) el.push_back(std::to_string(k));
  MonoidSpec spec{make_set("Z" + std::to_string(n), el), "0", {}};
  for (std::size_t a = 0; a < n; ++a) {
    spec.mul.emplace_back();
    for (std::size_t b = 0; b < n; ++b) spec.mul.back().push_back(el[(a + b) % n]);
  }
  return spec;
}

FamilyStack monoid_families(const MonoidSpec& spec, int levels) {
  validate(spec);
  MonadCode m0 = MonadCode::slice(MonadCode::id());
  FamilyStack s{m0, {FamilyRef::constant(spec.carrier)}};
  s.families.push_back(FamilyRef::fn("fold", [spec, m0](const Value& idx) -> std::vector<Value> {
    const Value& c = idx.snd().fst();
    const Value& nu = idx.snd().snd();
    std::vector<std::string> xs;
    for (const Value& p : pos_enum(m0, c)) xs.push_back(nu.at(p).name());
    if (idx.fst().snd().name() == spec.fold(xs)) return {Value::unit()};
    return {};
  }));
  for (int k = 2; k <= levels; ++k) s.families.push_back(FamilyRef::unit());
  return s;
}

FibrancyReport groupoid_check(const FiniteSetSpec& a, int levels, const Bounds& b) {
  Extension ext{MonadCode::id(), DepMonadCode::id(a)};
  return fibrancy_check(over_optype_stack(ext, levels), levels, b);
}

}  // namespace opetopic
