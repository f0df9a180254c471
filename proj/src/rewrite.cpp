#include "opetopic/rewrite.hpp"

#include <functional>
#include <map>
#include <set>

#include "opetopic/error.hpp"

namespace opetopic {

namespace {

struct RuleInfo {
  RuleId id;
  const char* name;
};

const RuleInfo kRules[kRuleCount] = {
    {RuleId::TypEta, "typ-eta"},
    {RuleId::TypMu, "typ-mu"},
    {RuleId::MuPosFst, "mu-pos-fst"},
    {RuleId::MuPosSnd, "mu-pos-snd"},
    {RuleId::MuPosEtaLaw, "mu-pos-eta"},
    {RuleId::MuEtaR, "mu-eta-r"},
    {RuleId::MuEtaL, "mu-eta-l"},
    {RuleId::MuMu, "mu-mu"},
    {RuleId::Beta, "beta"},
    {RuleId::FunEta, "fun-eta"},
    {RuleId::EtaPosElimComp, "eta-pos-elim"},
    {RuleId::MuPosUnitL, "mu-pos-unit-l"},
    {RuleId::MuPosUnitR, "mu-pos-unit-r"},
    {RuleId::MuPosAssoc, "mu-pos-assoc"},
};

using K = TermKind;

Term pos_var(const std::string& n) { return Term::var(n, Sort::Pos); }

std::set<std::string> names_of(const Term& t) {
  std::set<std::string> out;
  collect_names(t, out);
  return out;
}

// Lam x. Eta(Typ(c, x)) with x not free in c: the decoration of the
// right unit law over c.
bool is_unit_dec_over(const Term& dec, const Term& c) {
  if (!dec.is(K::Lam)) return false;
  const Term& body = dec.arg(0);
  if (!body.is(K::Eta) || !body.arg(0).is(K::Typ)) return false;
  const Term& ty = body.arg(0);
  const Term& x = ty.arg(1);
  return x.is(K::Var) && x.name() == dec.name() && !occurs_free(ty.arg(0), dec.name()) &&
         !occurs_free(c, dec.name()) && alpha_eq(ty.arg(0), c);
}

bool same_annotation(const Term& a, const Term& b) {
  return alpha_eq(a.arg(0), b.arg(0)) && alpha_eq(a.arg(1), b.arg(1));
}

}  // namespace

std::string_view rule_name(RuleId r) { return kRules[static_cast<std::size_t>(r)].name; }

std::optional<RuleId> rule_from_name(std::string_view name) {
  for (const RuleInfo& info : kRules)
    if (name == info.name) return info.id;
  return std::nullopt;
}

const std::vector<RuleId>& all_rules() {
  static const std::vector<RuleId> rules = [] {
    std::vector<RuleId> v;
    for (const RuleInfo& info : kRules) v.push_back(info.id);
    return v;
  }();
  return rules;
}

std::string_view strategy_name(Strategy s) {
  return s == Strategy::LeftmostOutermost ? "leftmost-outermost" : "rightmost-innermost";
}

std::optional<Strategy> strategy_from_name(std::string_view s) {
  if (s == "lo" || s == "leftmost-outermost") return Strategy::LeftmostOutermost;
  if (s == "ri" || s == "rightmost-innermost") return Strategy::RightmostInnermost;
  return std::nullopt;
}

std::string path_to_string(const Path& p) {
  if (p.empty()) return "root";
  std::string out;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k) out += '.';
    out += std::to_string(p[k]);
  }
  return out;
}

std::optional<Term> apply_rule(RuleId r, const Term& t) {
  switch (r) {
    case RuleId::TypEta:
      if (t.is(K::Typ) && t.arg(0).is(K::Eta)) return t.arg(0).arg(0);
      return std::nullopt;

    case RuleId::TypMu: {
      if (!t.is(K::Typ) || !t.arg(0).is(K::Mu)) return std::nullopt;
      const Term& c = t.arg(0).arg(0);
      const Term& d = t.arg(0).arg(1);
      const Term& p = t.arg(1);
      return Term::typ(Term::app(d, Term::mu_fst(c, d, p)), Term::mu_snd(c, d, p));
    }

    case RuleId::MuPosFst:
    case RuleId::MuPosSnd: {
      K want = r == RuleId::MuPosFst ? K::MuFst : K::MuSnd;
      if (!t.is(want) || !t.arg(2).is(K::MuPos) || !same_annotation(t, t.arg(2))) return std::nullopt;
      return t.arg(2).arg(r == RuleId::MuPosFst ? 2 : 3);
    }

    case RuleId::MuPosEtaLaw: {
      if (!t.is(K::MuPos)) return std::nullopt;
      const Term& f = t.arg(2);
      const Term& s = t.arg(3);
      if (!f.is(K::MuFst) || !s.is(K::MuSnd)) return std::nullopt;
      if (!same_annotation(t, f) || !same_annotation(t, s) || !alpha_eq(f.arg(2), s.arg(2)))
        return std::nullopt;
      return f.arg(2);
    }

    case RuleId::MuEtaR:
      if (t.is(K::Mu) && is_unit_dec_over(t.arg(1), t.arg(0))) return t.arg(0);
      return std::nullopt;

    case RuleId::MuEtaL:
      if (t.is(K::Mu) && t.arg(0).is(K::Eta))
        return Term::app(t.arg(1), Term::eta_pos(t.arg(0).arg(0)));
      return std::nullopt;

    case RuleId::MuMu: {
      if (!t.is(K::Mu) || !t.arg(0).is(K::Mu)) return std::nullopt;
      const Term& c = t.arg(0).arg(0);
      const Term& d = t.arg(0).arg(1);
      const Term& e = t.arg(1);
      auto avoid = names_of(t);
      std::string p = fresh_name("p", avoid);
      avoid.insert(p);
      std::string q = fresh_name("q", avoid);
      Term inner = Term::lam(q, Term::app(e, Term::mu_pos(c, d, pos_var(p), pos_var(q))));
      return Term::mu(c, Term::lam(p, Term::mu(Term::app(d, pos_var(p)), inner)));
    }

    case RuleId::Beta:
      if (t.is(K::App) && t.arg(0).is(K::Lam))
        return substitute(t.arg(0).arg(0), t.arg(0).name(), t.arg(1));
      return std::nullopt;

    case RuleId::FunEta: {
      if (!t.is(K::Lam) || !t.arg(0).is(K::App)) return std::nullopt;
      const Term& f = t.arg(0).arg(0);
      const Term& x = t.arg(0).arg(1);
      if (x.is(K::Var) && x.name() == t.name() && !occurs_free(f, t.name())) return f;
      return std::nullopt;
    }

    case RuleId::EtaPosElimComp:
      if (t.is(K::EtaPosElim) && t.arg(2).is(K::EtaPos) && alpha_eq(t.arg(0), t.arg(2).arg(0)))
        return t.arg(1);
      return std::nullopt;

    case RuleId::MuPosUnitL:
      if (t.is(K::MuPos) && t.arg(0).is(K::Eta) && t.arg(2).is(K::EtaPos) &&
          alpha_eq(t.arg(0).arg(0), t.arg(2).arg(0)))
        return t.arg(3);
      return std::nullopt;

    case RuleId::MuPosUnitR: {
      if (!t.is(K::MuPos) || !is_unit_dec_over(t.arg(1), t.arg(0))) return std::nullopt;
      const Term& c = t.arg(0);
      const Term& p = t.arg(2);
      const Term& q = t.arg(3);
      if (q.is(K::EtaPos) && q.arg(0).is(K::Typ) && alpha_eq(q.arg(0).arg(0), c) &&
          alpha_eq(q.arg(0).arg(1), p))
        return p;
      return std::nullopt;
    }

    case RuleId::MuPosAssoc: {
      if (!t.is(K::MuPos) || !t.arg(0).is(K::Mu) || !t.arg(2).is(K::MuPos)) return std::nullopt;
      const Term& inner = t.arg(2);
      const Term& c = t.arg(0).arg(0);
      const Term& d = t.arg(0).arg(1);
      if (!alpha_eq(inner.arg(0), c) || !alpha_eq(inner.arg(1), d)) return std::nullopt;
      const Term& e = t.arg(1);
      const Term& p = inner.arg(2);
      const Term& q = inner.arg(3);
      const Term& r2 = t.arg(3);
      auto avoid = names_of(t);
      std::string x = fresh_name("x", avoid);
      avoid.insert(x);
      std::string y = fresh_name("y", avoid);
      Term big_d = Term::lam(
          x, Term::mu(Term::app(d, pos_var(x)),
                      Term::lam(y, Term::app(e, Term::mu_pos(c, d, pos_var(x), pos_var(y))))));
      Term e_p = Term::lam(y, Term::app(e, Term::mu_pos(c, d, p, pos_var(y))));
      return Term::mu_pos(c, big_d, p, Term::mu_pos(Term::app(d, p), e_p, q, r2));
    }
  }
  return std::nullopt;
}

std::optional<std::pair<Term, RuleId>> contract(const Term& t, const RuleSet& rules) {
  for (RuleId r : all_rules()) {
    if (!rules.has(r)) continue;
    if (auto out = apply_rule(r, t)) return std::make_pair(*out, r);
  }
  return std::nullopt;
}

namespace {

std::optional<StepResult> step_rec(const Term& t, Strategy strategy, const RuleSet& rules, Path& path) {
  auto at_node = [&]() -> std::optional<StepResult> {
    if (auto c = contract(t, rules)) return StepResult{c->first, c->second, path};
    return std::nullopt;
  };
  auto in_child = [&](std::size_t k) -> std::optional<StepResult> {
    path.push_back(k);
    auto sub = step_rec(t.arg(k), strategy, rules, path);
    path.pop_back();
    if (!sub) return std::nullopt;
    std::vector<Term> args = t.args();
    args[k] = sub->term;
    sub->term = t.with_args(std::move(args));
    return sub;
  };

  std::size_t n = t.args().size();
  if (strategy == Strategy::LeftmostOutermost) {
    if (auto r = at_node()) return r;
    for (std::size_t k = 0; k < n; ++k)
      if (auto r = in_child(k)) return r;
    return std::nullopt;
  }
  for (std::size_t k = n; k-- > 0;)
    if (auto r = in_child(k)) return r;
  return at_node();
}

}  // namespace

std::optional<StepResult> step(const Term& t, Strategy strategy, const RuleSet& rules) {
  Path path;
  return step_rec(t, strategy, rules, path);
}

namespace {

void all_steps_rec(const Term& t, const RuleSet& rules, Path& path, const std::function<Term(Term)>& rebuild,
                   std::vector<StepResult>& out) {
  for (RuleId r : all_rules())
    if (rules.has(r))
      if (auto c = apply_rule(r, t)) out.push_back({rebuild(*c), r, path});
  for (std::size_t k = 0; k < t.args().size(); ++k) {
    path.push_back(k);
    all_steps_rec(t.arg(k), rules, path,
                  [&](Term sub) {
                    std::vector<Term> args = t.args();
                    args[k] = std::move(sub);
                    return rebuild(t.with_args(std::move(args)));
                  },
                  out);
    path.pop_back();
  }
}

}  // namespace

std::vector<StepResult> all_steps(const Term& t, const RuleSet& rules) {
  std::vector<StepResult> out;
  Path path;
  all_steps_rec(t, rules, path, [](Term x) { return x; }, out);
  return out;
}

NormalizationResult normalize(const Term& t, Strategy strategy, std::size_t budget, const RuleSet& rules,
                              bool keep_trace) {
  NormalizationResult res{t, 0, {}, false};
  for (;;) {
    if (res.steps >= budget) {
      res.exhausted_budget = step(res.normal_form, strategy, rules).has_value();
      return res;
    }
    auto s = step(res.normal_form, strategy, rules);
    if (!s) return res;
    res.normal_form = s->term;
    ++res.steps;
    if (keep_trace) res.trace.push_back({s->rule, std::move(s->path)});
  }
}

// ---------------------------------------------------------------------------
// Critical pairs

Term rule_lhs(RuleId r) {
  Term i = Term::var("i", Sort::Idx);
  Term c = Term::var("c", Sort::Cns);
  Term b = Term::var("b", Sort::Cns);
  Term d = Term::var("d", Sort::Dec);
  Term e = Term::var("e", Sort::Dec);
  Term p = pos_var("p");
  Term q = pos_var("q");
  Term rr = pos_var("r");
  Term a = pos_var("a");
  Term v = Term::var("v", Sort::Opaque);
  Term unit_dec = Term::lam("x", Term::eta(Term::typ(c, pos_var("x"))));
  switch (r) {
    case RuleId::TypEta: return Term::typ(Term::eta(i), p);
    case RuleId::TypMu: return Term::typ(Term::mu(c, d), p);
    case RuleId::MuPosFst: return Term::mu_fst(c, d, Term::mu_pos(c, d, p, q));
    case RuleId::MuPosSnd: return Term::mu_snd(c, d, Term::mu_pos(c, d, p, q));
    case RuleId::MuPosEtaLaw: return Term::mu_pos(c, d, Term::mu_fst(c, d, p), Term::mu_snd(c, d, p));
    case RuleId::MuEtaR: return Term::mu(c, unit_dec);
    case RuleId::MuEtaL: return Term::mu(Term::eta(i), d);
    case RuleId::MuMu: return Term::mu(Term::mu(c, d), e);
    case RuleId::Beta: return Term::app(Term::lam("x", b), a);
    case RuleId::FunEta: return Term::lam("x", Term::app(d, pos_var("x")));
    case RuleId::EtaPosElimComp: return Term::eta_pos_elim(i, v, Term::eta_pos(i));
    case RuleId::MuPosUnitL: return Term::mu_pos(Term::eta(i), d, Term::eta_pos(i), q);
    case RuleId::MuPosUnitR: return Term::mu_pos(c, unit_dec, p, Term::eta_pos(Term::typ(c, p)));
    case RuleId::MuPosAssoc: return Term::mu_pos(Term::mu(c, d), e, Term::mu_pos(c, d, p, q), rr);
  }
  throw Error("unknown rule");
}

namespace {

Term rewrite_at(const Term& t, const Path& path, std::size_t depth, RuleId r) {
  if (depth == path.size()) {
    auto out = apply_rule(r, t);
    if (!out) throw Error("rewrite_at: no " + std::string(rule_name(r)) + " redex at " + path_to_string(path));
    return *out;
  }
  std::vector<Term> args = t.args();
  args.at(path[depth]) = rewrite_at(args[path[depth]], path, depth + 1, r);
  return t.with_args(std::move(args));
}

CriticalPair make_pair(std::string name, Term peak, RuleId lr, const Path& lp, RuleId rr, const Path& rp) {
  Term left = rewrite_at(peak, lp, 0, lr);
  Term right = rewrite_at(peak, rp, 0, rr);
  return CriticalPair{std::move(name), std::move(peak), std::move(left), std::move(right), lr, rr};
}

// First-order unification of two patterns whose free variables are
// metavariables.  Bound variables unify only with themselves; binders of
// the right pattern are renamed to those of the left.
class Unifier {
 public:
  explicit Unifier(std::set<std::string> metas) : metas_(std::move(metas)) {}

  bool unify(const Term& a, const Term& b) { return go(a, b); }

  Term apply(const Term& t) const {
    if (t.is(K::Var)) {
      auto it = subst_.find(t.name());
      if (it != subst_.end() && !bound_now(t.name())) return apply(it->second);
      return t;
    }
    if (t.args().empty()) return t;
    std::vector<Term> args;
    for (const Term& a : t.args()) args.push_back(apply(a));
    return t.with_args(std::move(args));
  }

 private:
  bool is_meta(const Term& t) const {
    return t.is(K::Var) && metas_.count(t.name()) && !bound_now(t.name());
  }
  bool bound_now(const std::string& n) const {
    for (const auto& b : binders_)
      if (b == n) return true;
    return false;
  }
  Term resolve(Term t) const {
    while (is_meta(t)) {
      auto it = subst_.find(t.name());
      if (it == subst_.end()) break;
      t = it->second;
    }
    return t;
  }
  bool occurs(const std::string& m, const Term& t) const {
    Term r = resolve(t);
    if (r.is(K::Var)) return r.name() == m;
    for (const Term& a : r.args())
      if (occurs(m, a)) return true;
    return false;
  }
  bool bind(const Term& m, const Term& t) {
    if (m.sort() != t.sort()) return false;
    if (t.is(K::Var) && t.name() == m.name()) return true;
    if (occurs(m.name(), t)) return false;
    // Metavariables may not capture the binders they sit under.
    for (const auto& b : binders_)
      if (occurs_free(apply(t), b)) return false;
    subst_.emplace(m.name(), t);
    return true;
  }
  bool go(const Term& a0, const Term& b0) {
    Term a = resolve(a0), b = resolve(b0);
    if (is_meta(a)) return bind(a, b);
    if (is_meta(b)) return bind(b, a);
    if (a.kind() != b.kind() || a.sort() != b.sort()) return false;
    if (a.is(K::Var)) return a.name() == b.name();
    if (a.is(K::Lam)) {
      Term body_b = b.name() == a.name() ? b.arg(0) : substitute(b.arg(0), b.name(), pos_var(a.name()));
      binders_.push_back(a.name());
      bool ok = go(a.arg(0), body_b);
      binders_.pop_back();
      return ok;
    }
    for (std::size_t k = 0; k < a.args().size(); ++k)
      if (!go(a.arg(k), b.arg(k))) return false;
    return true;
  }

  std::set<std::string> metas_;
  std::map<std::string, Term> subst_;
  std::vector<std::string> binders_;
};

Term rename_free(const Term& t, const std::string& suffix, std::set<std::string>& metas) {
  Term out = t;
  for (const std::string& v : free_vars(t)) {
    // Find the sort of v by locating an occurrence.
    std::optional<Sort> sort;
    std::vector<Term> stack{t};
    while (!stack.empty() && !sort) {
      Term cur = stack.back();
      stack.pop_back();
      if (cur.is(K::Var) && cur.name() == v) sort = cur.sort();
      if (cur.is(K::Lam) && cur.name() == v) continue;
      for (const Term& a : cur.args()) stack.push_back(a);
    }
    std::string renamed = v + suffix;
    metas.insert(renamed);
    out = substitute(out, v, Term::var(renamed, *sort));
  }
  return out;
}

}  // namespace

std::vector<CriticalPair> curated_critical_pairs() {
  Term i = Term::var("i", Sort::Idx);
  Term c = Term::var("c", Sort::Cns);
  Term d = Term::var("d", Sort::Dec);
  Term e = Term::var("e", Sort::Dec);
  Term p = pos_var("p");
  Term q = pos_var("q");
  auto unit_dec = [](const Term& over) { return Term::lam("p", Term::eta(Term::typ(over, pos_var("p")))); };

  std::vector<CriticalPair> out;
  Term eta_i = Term::eta(i);
  out.push_back(make_pair("CP1", Term::mu(eta_i, unit_dec(eta_i)), RuleId::MuEtaR, {}, RuleId::MuEtaL, {}));
  Term mu_cd = Term::mu(c, d);
  out.push_back(make_pair("CP2", Term::mu(mu_cd, unit_dec(mu_cd)), RuleId::MuEtaR, {}, RuleId::MuMu, {}));
  out.push_back(make_pair("CP3", Term::mu(Term::mu(eta_i, d), e), RuleId::MuMu, {}, RuleId::MuEtaL, {0}));
  Term pq = Term::mu_pos(c, d, p, q);
  Term peak45 = Term::mu_pos(c, d, Term::mu_fst(c, d, pq), Term::mu_snd(c, d, pq));
  out.push_back(make_pair("CP4", peak45, RuleId::MuPosEtaLaw, {}, RuleId::MuPosFst, {2}));
  out.push_back(make_pair("CP5", peak45, RuleId::MuPosEtaLaw, {}, RuleId::MuPosSnd, {3}));
  return out;
}

std::vector<CriticalPair> root_overlaps(const RuleSet& rules) {
  std::vector<CriticalPair> out;
  const auto& all = all_rules();
  for (std::size_t a = 0; a < all.size(); ++a) {
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      RuleId ra = all[a], rb = all[b];
      if (!rules.has(ra) || !rules.has(rb)) continue;
      std::set<std::string> metas;
      Term la = rename_free(rule_lhs(ra), "_l", metas);
      Term lb = rename_free(rule_lhs(rb), "_r", metas);
      Unifier u(metas);
      if (!u.unify(la, lb)) continue;
      Term peak = u.apply(la);
      auto left = apply_rule(ra, peak);
      auto right = apply_rule(rb, peak);
      if (!left || !right) continue;
      out.push_back(CriticalPair{std::string(rule_name(ra)) + "/" + std::string(rule_name(rb)), peak,
                                 *left, *right, ra, rb});
    }
  }
  return out;
}

std::vector<CriticalPair> critical_pairs(const RuleSet& rules) {
  std::vector<CriticalPair> out = curated_critical_pairs();
  for (CriticalPair& cp : root_overlaps(rules)) out.push_back(std::move(cp));
  return out;
}

JoinReport check_joinable(const CriticalPair& cp, std::size_t budget, const RuleSet& rules) {
  JoinReport rep{cp, false, std::nullopt, {}, {}};
  for (Strategy s : {Strategy::LeftmostOutermost, Strategy::RightmostInnermost}) {
    rep.left.push_back({s, normalize(cp.left_reduct, s, budget, rules)});
    rep.right.push_back({s, normalize(cp.right_reduct, s, budget, rules)});
  }
  rep.joined = true;
  const Term& first = rep.left.front().result.normal_form;
  for (const auto* side : {&rep.left, &rep.right})
    for (const BranchResult& br : *side)
      if (br.result.exhausted_budget || !alpha_eq(br.result.normal_form, first)) rep.joined = false;
  if (rep.joined) rep.meet = first;
  return rep;
}

}  // namespace opetopic
