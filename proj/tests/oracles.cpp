#include "oracles.hpp"

#include <functional>
#include <unordered_map>

#include "opetopic/monad.hpp"

namespace oracle {

using namespace opetopic;

namespace {

template <class Where>
void tally(LawReport& r, const std::string& law, bool ok, const Where& where) {
  LawTally& t = r[law];
  ++t.checked;
  if (!ok && t.failures++ == 0) t.first_failure = where();
}

}  // namespace

std::vector<Value> bounded_decorations(const MonadCode& m, const Value& c, std::size_t budget) {
  std::vector<Value> ps = pos_enum(m, c);
  std::vector<std::vector<std::pair<Value, std::size_t>>> choices;
  for (const Value& p : ps) {
    choices.emplace_back();
    for (const Value& d : cns_enum(m, typ(m, c, p), budget)) choices.back().emplace_back(d, cns_size(m, d));
  }
  std::vector<Value> out;
  std::vector<std::pair<Value, Value>> cur;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t k, std::size_t left) {
    if (k == ps.size()) {
      out.push_back(Value::dec(cur));
      return;
    }
    for (const auto& [d, s] : choices[k]) {
      if (s > left) continue;
      cur.emplace_back(ps[k], d);
      go(k + 1, left - s);
      cur.pop_back();
    }
  };
  go(0, budget);
  return out;
}

LawReport monad_laws(const MonadCode& m, std::size_t bound) {
  LawReport r;
  for (const Value& i : idx_enum(m, bound)) {
    Value e = eta(m, i);
    Value ep = eta_pos(m, i);
    tally(r, "typ-eta", typ(m, e, ep) == i, [&] { return i.to_string(); });
    for (const Value& d : bounded_decorations(m, e, bound))
      tally(r, "mu-eta-l", mu(m, e, d) == d.at(ep), [&] { return d.to_string(); });

    for (const Value& c : cns_enum(m, i, bound)) {
      std::vector<Value> ps = pos_enum(m, c);
      Value unit = make_dec(ps, [&](const Value& p) { return eta(m, typ(m, c, p)); });
      tally(r, "mu-eta-r", mu(m, c, unit) == c, [&] { return c.to_string(); });

      for (const Value& d : bounded_decorations(m, c, bound)) {
        auto where = [&] { return c.to_string() + " / " + d.to_string(); };
        Value cd = mu(m, c, d);
        for (const Value& p : ps)
          for (const Value& q : pos_enum(m, d.at(p))) {
            Value pq = mu_pos(m, c, d, p, q);
            tally(r, "typ-mu", typ(m, cd, pq) == typ(m, d.at(p), q), where);
            tally(r, "mu-pos-fst", mu_fst(m, c, d, pq) == p, where);
            tally(r, "mu-pos-snd", mu_snd(m, c, d, pq) == q, where);
          }
        for (const Value& pq : pos_enum(m, cd))
          tally(r, "mu-pos-eta", mu_pos(m, c, d, mu_fst(m, c, d, pq), mu_snd(m, c, d, pq)) == pq, where);

        // mu_pos(c, d, p, q) for each p, in the order of pos_enum(d p).
        std::vector<std::vector<std::pair<Value, Value>>> pairing;
        for (const Value& p : ps) {
          pairing.emplace_back();
          for (const Value& q : pos_enum(m, d.at(p))) pairing.back().emplace_back(q, mu_pos(m, c, d, p, q));
        }
        // mu(d p, g) recurs across f; keyed by (p, g).
        std::vector<std::unordered_map<Value, Value, ValueHash>> inner_mu(ps.size());
        for (const Value& f : bounded_decorations(m, cd, bound)) {
          std::vector<std::pair<Value, Value>> inner;
          for (std::size_t k = 0; k < ps.size(); ++k) {
            std::vector<std::pair<Value, Value>> g;
            for (const auto& [q, pq] : pairing[k]) g.emplace_back(q, f.at(pq));
            Value gv = Value::dec(g);
            auto it = inner_mu[k].find(gv);
            if (it == inner_mu[k].end()) it = inner_mu[k].emplace(gv, mu(m, d.at(ps[k]), gv)).first;
            inner.emplace_back(ps[k], it->second);
          }
          tally(r, "mu-mu", mu(m, cd, f) == mu(m, c, Value::dec(inner)), [&] { return where() + " / " + f.to_string(); });
        }
      }
    }
  }
  return r;
}

LawReport cartesian_laws(const MonadCode& m, std::size_t bound) {
  LawReport r;
  for (const Value& i : idx_enum(m, bound)) {
    std::vector<Value> ep = pos_enum(m, eta(m, i));
    tally(r, "eta-singleton", ep.size() == 1 && ep[0] == eta_pos(m, i), [&] { return i.to_string(); });
    for (const Value& c : cns_enum(m, i, bound)) {
      std::vector<Value> ps = pos_enum(m, c);
      for (const Value& d : bounded_decorations(m, c, bound)) {
        auto where = [&] { return c.to_string() + " / " + d.to_string(); };
        std::vector<Value> composite = pos_enum(m, mu(m, c, d));
        std::size_t sum = 0;
        std::map<Value, int> hit;
        bool in_range = true;
        for (const Value& p : ps)
          for (const Value& q : pos_enum(m, d.at(p))) {
            ++sum;
            Value pq = mu_pos(m, c, d, p, q);
            ++hit[pq];
            bool found = false;
            for (const Value& x : composite) found |= x == pq;
            in_range &= found;
          }
        tally(r, "pos-count", composite.size() == sum, where);
        bool bijective = in_range && hit.size() == composite.size();
        for (const auto& [pq, n] : hit) bijective &= n == 1;
        tally(r, "mu-pos-bijective", bijective, where);
        bool inverse = true;
        for (const Value& pq : composite) {
          Value p = mu_fst(m, c, d, pq);
          inverse &= mu_pos(m, c, d, p, mu_snd(m, c, d, pq)) == pq;
        }
        tally(r, "mu-pos-inverse", inverse, where);
      }
    }
  }
  return r;
}

std::size_t total_failures(const LawReport& r) {
  std::size_t n = 0;
  for (const auto& [law, t] : r) n += t.failures;
  return n;
}

std::size_t total_checked(const LawReport& r) {
  std::size_t n = 0;
  for (const auto& [law, t] : r) n += t.checked;
  return n;
}

std::size_t planar_trees(std::size_t n, std::size_t l, std::size_t max_arity) {
  // count[n][l] for trees, built up by number of nodes.
  std::vector<std::vector<std::size_t>> tree(n + 1, std::vector<std::size_t>(n * max_arity + 2, 0));
  std::size_t width = tree[0].size();
  tree[0][1] = 1;
  for (std::size_t nodes = 1; nodes <= n; ++nodes) {
    // forest[k][a][b]: k input slots filled with a nodes and b leaves in total.
    std::vector<std::vector<std::size_t>> forest(nodes, std::vector<std::size_t>(width, 0));
    forest[0][0] = 1;
    for (std::size_t k = 0; k <= max_arity; ++k) {
      for (std::size_t b = 0; b < width; ++b) tree[nodes][b] += forest[nodes - 1][b];
      if (k == max_arity) break;
      std::vector<std::vector<std::size_t>> next(nodes, std::vector<std::size_t>(width, 0));
      for (std::size_t a = 0; a < nodes; ++a)
        for (std::size_t b = 0; b < width; ++b) {
          if (!forest[a][b]) continue;
          for (std::size_t a2 = 0; a + a2 < nodes; ++a2)
            for (std::size_t b2 = 0; b + b2 < width; ++b2)
              if (tree[a2][b2]) next[a + a2][b + b2] += forest[a][b] * tree[a2][b2];
        }
      forest = std::move(next);
    }
  }
  return l < width ? tree[n][l] : 0;
}

bool is_monoid(const MonoidSpec& spec) {
  const auto& el = spec.carrier.elements;
  auto mul = [&](const std::string& a, const std::string& b) {
    std::size_t i = 0, j = 0;
    while (el[i] != a) ++i;
    while (el[j] != b) ++j;
    return spec.mul[i][j];
  };
  for (const std::string& a : el) {
    if (mul(spec.unit, a) != a || mul(a, spec.unit) != a) return false;
    for (const std::string& b : el)
      for (const std::string& c : el)
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) return false;
  }
  return true;
}

MultCount naive_ismult(const MonadCode& m, const FamilyRef& x0, const FamilyRef& x1, std::size_t bound) {
  MultCount out;
  for (const Value& i : idx_enum(m, bound))
    for (const Value& c : cns_enum(m, i, bound)) {
      std::vector<Value> ps = pos_enum(m, c);
      auto nus = all_decorations(ps, [&](const Value& p) { return family_at(x0, typ(m, c, p)); });
      for (const Value& nu : nus) {
        std::size_t n = 0;
        for (const Value& x : family_at(x0, i))
          n += family_at(x1, Value::pair(Value::pair(i, x), Value::pair(c, nu))).size();
        ++out.checked;
        out.failures += n != 1;
      }
    }
  return out;
}

}  // namespace oracle
