#include "opetopic/dep_monad.hpp"

#include "opetopic/error.hpp"
#include "opetopic/monad.hpp"

namespace opetopic {

using VK = ValueKind;

namespace {

void expect_pair(const Value& v, const char* what) {
  if (!v.is(VK::Pair)) throw EvalError(std::string(what) + ": expected a pair, got " + v.to_string());
}

std::vector<Value> dep_family_at(const DepFamily& fam, const Value& j, const Value& x) {
  if (fam.is_eq) {
    if (j == x) return {Value::refl()};
    return {};
  }
  auto it = fam.table.find(Value::pair(j, x));
  if (it == fam.table.end())
    throw EvalError("(" + j.to_string() + ", " + x.to_string() + ") is outside the domain of table " + fam.name);
  return it->second;
}

struct DownTree {
  Value tree;
  Value image;
};

// Every dependent tree over sigma rooted at jd, paired with its image.
std::vector<DownTree> trees_down(const DepMonadCode& d, const Value& sigma, const Value& jd) {
  MonadCode b = base_of(d);
  if (sigma.is(VK::Leaf)) return {{Value::leaf_down(jd), deta(d, sigma.tree_idx(), jd)}};
  if (!sigma.is(VK::Node)) throw EvalError("dcns_enum(slice): expected a tree, got " + sigma.to_string());
  const Value& bi = sigma.tree_idx();
  const Value& c = sigma.tree_cns();
  const Value& delta = sigma.tree_delta();
  const Value& eps = sigma.tree_eps();
  std::vector<DownTree> out;
  for (const Value& cd : dcns_enum(d, bi, jd, c)) {
    std::vector<std::vector<DownTree>> opts;
    bool empty = false;
    for (std::size_t k = 0; k < eps.dec_size(); ++k) {
      const Value& p = eps.dec_key(k);
      opts.push_back(trees_down(d, eps.dec_val(k), dtyp(d, bi, jd, c, cd, p)));
      if (opts.back().empty()) empty = true;
    }
    if (empty) continue;
    std::vector<std::size_t> pick(opts.size(), 0);
    for (;;) {
      std::vector<std::pair<Value, Value>> dd, ed;
      for (std::size_t k = 0; k < opts.size(); ++k) {
        dd.emplace_back(eps.dec_key(k), opts[k][pick[k]].image);
        ed.emplace_back(eps.dec_key(k), opts[k][pick[k]].tree);
      }
      Value ddv = Value::dec(dd);
      out.push_back({Value::node_down(jd, cd, ddv, Value::dec(ed)), dmu(d, bi, jd, c, cd, delta, ddv)});
      std::size_t k = opts.size();
      bool done = true;
      while (k > 0) {
        --k;
        if (++pick[k] < opts[k].size()) {
          done = false;
          break;
        }
        pick[k] = 0;
      }
      if (done) break;
    }
  }
  return out;
}

Value dgraft(const DepMonadCode& d, const Value& sigma, const Value& sigma_d, const Value& phi,
             const Value& phi_d, const Value& psi, const Value& psi_d) {
  MonadCode b = base_of(d);
  if (sigma.is(VK::Leaf)) {
    if (!sigma_d.is(VK::LeafDown)) throw EvalError("dgraft: " + sigma_d.to_string() + " does not lie over a leaf");
    return psi_d.at(eta_pos(b, sigma.tree_idx()));
  }
  if (!sigma.is(VK::Node) || !sigma_d.is(VK::NodeDown))
    throw EvalError("dgraft: " + sigma_d.to_string() + " does not lie over " + sigma.to_string());
  const Value& bi = sigma.tree_idx();
  const Value& c = sigma.tree_cns();
  const Value& delta = sigma.tree_delta();
  const Value& eps = sigma.tree_eps();
  const Value& jd = sigma_d.tree_idx();
  const Value& cd = sigma_d.tree_cns();
  const Value& delta_d = sigma_d.tree_delta();
  const Value& eps_d = sigma_d.tree_eps();
  TrackedMu comp = mu_tracked(b, c, delta);
  std::vector<std::pair<Value, Value>> delta2, eps2;
  for (std::size_t k = 0; k < delta.dec_size(); ++k) {
    const Value& p = delta.dec_key(k);
    auto qs = pos_enum(b, delta.dec_val(k));
    auto restrict = [&](const Value& dec) {
      return make_dec(qs, [&](const Value& q) { return dec.at(comp.position_of(p, q)); });
    };
    Value phi_p = restrict(phi), phi_dp = restrict(phi_d), psi_p = restrict(psi), psi_dp = restrict(psi_d);
    delta2.emplace_back(p, dmu(d, typ(b, c, p), dtyp(d, bi, jd, c, cd, p), delta.at(p), delta_d.at(p), phi_p, phi_dp));
    eps2.emplace_back(p, dgraft(d, eps.at(p), eps_d.at(p), phi_p, phi_dp, psi_p, psi_dp));
  }
  return Value::node_down(jd, cd, Value::dec(delta2), Value::dec(eps2));
}

}  // namespace

std::vector<Value> didx_enum(const DepMonadCode& md, const Value& i) {
  switch (md.kind()) {
    case DepKind::Id:
      if (!i.is(VK::Unit)) throw EvalError("didx_enum(id-dep): expected tt, got " + i.to_string());
      return md.carrier().values();
    case DepKind::Pb: {
      expect_pair(i, "didx_enum(pb-dep)");
      std::vector<Value> out;
      for (const Value& j : didx_enum(md.base(), i.fst()))
        for (const Value& w : dep_family_at(md.family(), j, i.snd())) out.push_back(Value::pair(j, w));
      return out;
    }
    case DepKind::Slice: {
      expect_pair(i, "didx_enum(slice-dep)");
      std::vector<Value> out;
      for (const Value& j : didx_enum(md.base(), i.fst()))
        for (const Value& cd : dcns_enum(md.base(), i.fst(), j, i.snd())) out.push_back(Value::pair(j, cd));
      return out;
    }
  }
  return {};
}

std::vector<Value> dcns_enum(const DepMonadCode& md, const Value& i, const Value& jd, const Value& c) {
  switch (md.kind()) {
    case DepKind::Id:
      if (!c.is(VK::Unit)) throw EvalError("dcns_enum(id-dep): expected tt, got " + c.to_string());
      return {Value::unit()};
    case DepKind::Pb: {
      expect_pair(i, "dcns_enum(pb-dep) index");
      expect_pair(jd, "dcns_enum(pb-dep) dependent index");
      expect_pair(c, "dcns_enum(pb-dep) constructor");
      const DepMonadCode& d = md.base();
      MonadCode b = base_of(d);
      std::vector<Value> out;
      for (const Value& cd : dcns_enum(d, i.fst(), jd.fst(), c.fst())) {
        auto decs = all_decorations(pos_enum(b, c.fst()), [&](const Value& p) {
          return dep_family_at(md.family(), dtyp(d, i.fst(), jd.fst(), c.fst(), cd, p), c.snd().at(p));
        });
        for (Value& nd : decs) out.push_back(Value::pair(cd, std::move(nd)));
      }
      return out;
    }
    case DepKind::Slice: {
      expect_pair(i, "dcns_enum(slice-dep) index");
      expect_pair(jd, "dcns_enum(slice-dep) dependent index");
      std::vector<Value> out;
      for (DownTree& t : trees_down(md.base(), c, jd.fst()))
        if (t.image == jd.snd()) out.push_back(std::move(t.tree));
      return out;
    }
  }
  return {};
}

Value dtyp(const DepMonadCode& md, const Value& i, const Value& jd, const Value& c, const Value& cd,
           const Value& p) {
  switch (md.kind()) {
    case DepKind::Id: return jd;
    case DepKind::Pb: {
      expect_pair(cd, "dtyp(pb-dep)");
      return Value::pair(dtyp(md.base(), i.fst(), jd.fst(), c.fst(), cd.fst(), p), cd.snd().at(p));
    }
    case DepKind::Slice: {
      if (!c.is(VK::Node) || !cd.is(VK::NodeDown))
        throw EvalError("position " + p.to_string() + " does not occur in " + cd.to_string());
      if (p.is(VK::Here)) return Value::pair(cd.tree_idx(), cd.tree_cns());
      if (!p.is(VK::Under)) throw EvalError("not a slice position: " + p.to_string());
      const DepMonadCode& d = md.base();
      MonadCode b = base_of(d);
      const Value& q = p.fst();
      Value sub_i = Value::pair(typ(b, c.tree_cns(), q), c.tree_delta().at(q));
      Value sub_j = Value::pair(dtyp(d, c.tree_idx(), cd.tree_idx(), c.tree_cns(), cd.tree_cns(), q),
                                cd.tree_delta().at(q));
      return dtyp(md, sub_i, sub_j, c.tree_eps().at(q), cd.tree_eps().at(q), p.snd());
    }
  }
  return Value::unit();
}

Value deta(const DepMonadCode& md, const Value& i, const Value& jd) {
  switch (md.kind()) {
    case DepKind::Id: return Value::unit();
    case DepKind::Pb:
      expect_pair(i, "deta(pb-dep)");
      expect_pair(jd, "deta(pb-dep)");
      return Value::pair(deta(md.base(), i.fst(), jd.fst()), deta_dec(md.base(), i.fst(), jd.snd()));
    case DepKind::Slice: {
      expect_pair(i, "deta(slice-dep)");
      expect_pair(jd, "deta(slice-dep)");
      const DepMonadCode& d = md.base();
      MonadCode b = base_of(d);
      const Value& bi = i.fst();
      const Value& c = i.snd();
      const Value& j = jd.fst();
      const Value& cd = jd.snd();
      auto ps = pos_enum(b, c);
      Value dd = make_dec(ps, [&](const Value& p) { return deta(d, typ(b, c, p), dtyp(d, bi, j, c, cd, p)); });
      Value ed = make_dec(ps, [&](const Value& p) { return Value::leaf_down(dtyp(d, bi, j, c, cd, p)); });
      return Value::node_down(j, cd, dd, ed);
    }
  }
  return Value::unit();
}

Value deta_dec(const DepMonadCode& md, const Value& i, const Value& x) {
  MonadCode b = base_of(md);
  return make_dec(pos_enum(b, eta(b, i)), [&](const Value&) { return x; });
}

Value dmu(const DepMonadCode& md, const Value& i, const Value& jd, const Value& c, const Value& cd,
          const Value& delta, const Value& dd) {
  switch (md.kind()) {
    case DepKind::Id: return Value::unit();
    case DepKind::Pb: {
      expect_pair(c, "dmu(pb-dep)");
      expect_pair(cd, "dmu(pb-dep)");
      const DepMonadCode& d = md.base();
      MonadCode b = base_of(d);
      auto ps = pos_enum(b, c.fst());
      Value d0 = make_dec(ps, [&](const Value& p) { return delta.at(p).fst(); });
      Value dd0 = make_dec(ps, [&](const Value& p) { return dd.at(p).fst(); });
      Value r0 = dmu(d, i.fst(), jd.fst(), c.fst(), cd.fst(), d0, dd0);
      TrackedMu comp = mu_tracked(b, c.fst(), d0);
      std::vector<std::pair<Value, Value>> nu;
      for (std::size_t k = 0; k < comp.positions.size(); ++k) {
        const auto& [p, q] = comp.origins[k];
        nu.emplace_back(comp.positions[k], dd.at(p).snd().at(q));
      }
      return Value::pair(r0, Value::dec(nu));
    }
    case DepKind::Slice: {
      const DepMonadCode& d = md.base();
      MonadCode b = base_of(d);
      MonadCode sb = MonadCode::slice(b);
      if (c.is(VK::Leaf)) {
        if (!cd.is(VK::LeafDown)) throw EvalError("dmu: " + cd.to_string() + " does not lie over a leaf");
        return cd;
      }
      if (!c.is(VK::Node) || !cd.is(VK::NodeDown))
        throw EvalError("dmu: " + cd.to_string() + " does not lie over " + c.to_string());
      const Value& eps = c.tree_eps();
      const Value& eps_d = cd.tree_eps();
      std::vector<std::pair<Value, Value>> psi, psi_d;
      for (std::size_t k = 0; k < eps.dec_size(); ++k) {
        const Value& p = eps.dec_key(k);
        const Value& sub = eps.dec_val(k);
        auto qs = pos_enum(sb, sub);
        Value phi_p = make_dec(qs, [&](const Value& q) { return delta.at(Value::under(p, q)); });
        Value phi_dp = make_dec(qs, [&](const Value& q) { return dd.at(Value::under(p, q)); });
        psi.emplace_back(p, mu(sb, sub, phi_p));
        psi_d.emplace_back(p, dmu(md, Value::unit(), Value::unit(), sub, eps_d.at(p), phi_p, phi_dp));
      }
      return dgraft(d, delta.at(Value::here()), dd.at(Value::here()), c.tree_delta(), cd.tree_delta(),
                    Value::dec(psi), Value::dec(psi_d));
    }
  }
  return Value::unit();
}

bool lies_over(const DepMonadCode& md, const Value& cd, const Value& c) {
  switch (md.kind()) {
    case DepKind::Id: return cd.is(VK::Unit) && c.is(VK::Unit);
    case DepKind::Pb: {
      if (!cd.is(VK::Pair) || !c.is(VK::Pair)) return false;
      if (!lies_over(md.base(), cd.fst(), c.fst())) return false;
      const Value& nd = cd.snd();
      const Value& nu = c.snd();
      if (!nd.is(VK::Dec) || nd.dec_size() != nu.dec_size()) return false;
      for (std::size_t k = 0; k < nd.dec_size(); ++k)
        if (nd.dec_key(k) != nu.dec_key(k)) return false;
      return true;
    }
    case DepKind::Slice: {
      if (c.is(VK::Leaf)) return cd.is(VK::LeafDown);
      if (!c.is(VK::Node) || !cd.is(VK::NodeDown)) return false;
      if (!lies_over(md.base(), cd.tree_cns(), c.tree_cns())) return false;
      const Value& e = c.tree_eps();
      const Value& ed = cd.tree_eps();
      const Value& dl = c.tree_delta();
      const Value& dld = cd.tree_delta();
      if (ed.dec_size() != e.dec_size() || dld.dec_size() != dl.dec_size()) return false;
      for (std::size_t k = 0; k < e.dec_size(); ++k) {
        if (ed.dec_key(k) != e.dec_key(k)) return false;
        if (!lies_over(md.base(), dld.dec_val(k), dl.dec_val(k))) return false;
        if (!lies_over(md, ed.dec_val(k), e.dec_val(k))) return false;
      }
      return true;
    }
  }
  return false;
}

Extension next_extension(const Extension& ext) {
  return Extension{MonadCode::slice(MonadCode::pb(ext.m, FamilyRef::dep_idx(ext.md))),
                   DepMonadCode::slice(DepMonadCode::pb(ext.md))};
}

Extension tower(const Extension& ext, int n) {
  Extension cur = ext;
  for (int k = 0; k < n; ++k) cur = next_extension(cur);
  return cur;
}

FamilyRef over_optype_family(const Extension& ext, int n) {
  if (n < 0) throw EvalError("over_optype_family: negative level");
  return FamilyRef::dep_idx(tower(ext, n).md);
}

}  // namespace opetopic
