#include "opetopic/interpret.hpp"

#include <memory>
#include <optional>
#include <random>
#include <unordered_map>

#include "opetopic/error.hpp"
#include "opetopic/monad.hpp"

namespace opetopic {

using VK = ValueKind;
using K = TermKind;

bool has_role(const MonadCode& m, Sort s, const Value& v) {
  switch (s) {
    case Sort::Opaque: return true;
    case Sort::Dec: return v.is(VK::Dec);
    case Sort::Idx:
      return m.kind() == MonadKind::Id ? v.is(VK::Unit) : v.is(VK::Pair);
    case Sort::Cns:
      switch (m.kind()) {
        case MonadKind::Id: return v.is(VK::Unit);
        case MonadKind::Pb: return v.is(VK::Pair) && has_role(m.base(), Sort::Cns, v.fst());
        case MonadKind::Slice: return v.is(VK::Leaf) || v.is(VK::Node);
      }
      return false;
    case Sort::Pos:
      switch (m.kind()) {
        case MonadKind::Id: return v.is(VK::Unit);
        case MonadKind::Pb: return has_role(m.base(), Sort::Pos, v);
        case MonadKind::Slice: return v.is(VK::Here) || v.is(VK::Under);
      }
      return false;
  }
  return false;
}

namespace {

class Interp {
 public:
  Interp(const MonadCode& m, const Env& env) : m_(m), env_(env) {}

  Value eval(const Term& t) {
    switch (t.kind()) {
      case K::Var: {
        auto it = env_.find(t.name());
        if (it == env_.end()) throw EvalError("unbound variable " + t.name());
        if (!has_role(m_, t.sort(), it->second))
          throw EvalError("variable " + t.name() + " of sort " + std::string(sort_name(t.sort())) +
                          " is bound to " + it->second.to_string());
        return it->second;
      }
      case K::Eta: return eta(m_, eval(t.arg(0)));
      case K::Mu: {
        Value c = eval(t.arg(0));
        return mu(m_, c, dec(t.arg(1), c));
      }
      case K::Typ: return typ(m_, eval(t.arg(0)), eval(t.arg(1)));
      case K::EtaPos: return eta_pos(m_, eval(t.arg(0)));
      case K::MuPos: {
        Value c = eval(t.arg(0));
        return mu_pos(m_, c, dec(t.arg(1), c), eval(t.arg(2)), eval(t.arg(3)));
      }
      case K::MuFst: {
        Value c = eval(t.arg(0));
        return mu_fst(m_, c, dec(t.arg(1), c), eval(t.arg(2)));
      }
      case K::MuSnd: {
        Value c = eval(t.arg(0));
        return mu_snd(m_, c, dec(t.arg(1), c), eval(t.arg(2)));
      }
      case K::Lam: throw EvalError("a decoration needs the constructor it decorates: " + t.to_string());
      case K::App: {
        Value p = eval(t.arg(1));
        const Term& d = t.arg(0);
        if (d.is(K::Lam)) return under(d.name(), p, [&] { return eval(d.arg(0)); });
        return eval(d).at(p);
      }
      case K::EtaPosElim: {
        Value i = eval(t.arg(0));
        Value p = eval(t.arg(2));
        if (p != eta_pos(m_, i))
          throw EvalError("eta-elim: " + p.to_string() + " is not a position of the unit at " + i.to_string());
        return eval(t.arg(1));
      }
    }
    throw EvalError("unknown term");
  }

 private:
  // A decoration term tabulated over the positions of c.
  Value dec(const Term& d, const Value& c) {
    if (!d.is(K::Lam)) {
      Value v = eval(d);
      check_dec(v, pos_enum(m_, c), "decoration variable");
      return v;
    }
    return make_dec(pos_enum(m_, c), [&](const Value& p) { return under(d.name(), p, [&] { return eval(d.arg(0)); }); });
  }

  template <class F>
  Value under(const std::string& x, const Value& p, F body) {
    auto it = env_.find(x);
    std::optional<Value> saved;
    if (it != env_.end()) saved = it->second;
    env_[x] = p;
    Value out = body();
    if (saved) env_[x] = *saved; else env_.erase(x);
    return out;
  }

  MonadCode m_;
  Env env_;
};

// ---------------------------------------------------------------------------
// Typed generator

struct CnsT;
struct DecT {
  Term t;
  Value d;
};
struct MuParts;
struct CnsT {
  Term t;
  Value c;
  Value i;
  std::shared_ptr<const MuParts> parts;  // set when t is Mu(c1, d1)
};
struct MuParts {
  CnsT c1;
  DecT d1;
};
struct IdxT {
  Term t;
  Value i;
};
struct PosT {
  Term t;
  Value p;
};

class TypedGen {
 public:
  TypedGen(const MonadCode& m, std::size_t bound, std::uint64_t seed) : m_(m), bound_(bound), rng_(seed) {
    idx_ = idx_enum(m_, bound_);
    if (idx_.empty()) throw EvalError("random_closed_term: " + m_.to_string() + " has no indices within bound");
    for (const Value& i : idx_)
      for (const Value& c : cns_at(i))
        if (!pos_enum(m_, c).empty()) with_pos_.push_back({Term::var("_", Sort::Cns), c, i, nullptr});
    if (with_pos_.empty()) throw EvalError("random_closed_term: no constructor with positions within bound");
  }

  ClosedTerm top(int depth) {
    Term t = Term::var("_", Sort::Idx);
    Value v;
    switch (pick(4)) {
      case 0: {
        IdxT x = idx(depth);
        t = x.t, v = x.i;
        break;
      }
      case 1: {
        CnsT x = cns(depth);
        t = x.t, v = x.c;
        break;
      }
      case 2: {
        CnsT c = cns_with_pos(depth - 1);
        PosT x = pos(c, depth - 1);
        DecT d = var_dec(c.c);
        auto qs = pos_enum(m_, d.d.at(x.p));
        if (!qs.empty() && pick(3) == 0) {
          // mu-pos-snd redex
          Value q = choose(qs);
          t = Term::mu_snd(c.t, d.t, Term::mu_pos(c.t, d.t, x.t, bind(Sort::Pos, q)));
          v = q;
        } else {
          t = x.t, v = x.p;
        }
        break;
      }
      default: {
        IdxT i = idx(depth - 1);
        Value o = Value::atom("o" + std::to_string(counter_++));
        t = Term::eta_pos_elim(i.t, bind(Sort::Opaque, o), Term::eta_pos(i.t));
        v = o;
      }
    }
    return ClosedTerm{t, env_, v};
  }

 private:
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  template <class T>
  const T& choose(const std::vector<T>& v) { return v[pick(v.size())]; }

  const std::vector<Value>& cns_at(const Value& i) {
    auto it = cns_.find(i);
    if (it != cns_.end()) return it->second;
    return cns_.emplace(i, cns_enum(m_, i, bound_)).first->second;
  }

  Term bind(Sort s, const Value& v) {
    static const char* prefix[] = {"i", "c", "p", "d", "o"};
    std::string name = std::string(prefix[static_cast<int>(s)]) + std::to_string(counter_++);
    env_[name] = v;
    return Term::var(name, s);
  }

  IdxT idx(int depth) {
    if (depth <= 1 || pick(4) == 0) {
      Value i = choose(idx_);
      return {bind(Sort::Idx, i), i};
    }
    if (pick(2) == 0) {
      IdxT inner = idx(depth - 1);
      return {Term::typ(Term::eta(inner.t), Term::eta_pos(inner.t)), inner.i};
    }
    CnsT c = cns_with_pos(depth - 1);
    PosT p = pos(c, depth - 1);
    return {Term::typ(c.t, p.t), typ(m_, c.c, p.p)};
  }

  IdxT idx_exact(const Value& i, int depth) {
    if (depth <= 1 || pick(3) == 0) return {bind(Sort::Idx, i), i};
    IdxT inner = idx_exact(i, depth - 1);
    return {Term::typ(Term::eta(inner.t), Term::eta_pos(inner.t)), i};
  }

  CnsT var_cns() {
    Value i = choose(idx_);
    const auto& cs = cns_at(i);
    if (cs.empty()) {
      Value c = eta(m_, i);
      return {bind(Sort::Cns, c), c, i, nullptr};
    }
    Value c = choose(cs);
    return {bind(Sort::Cns, c), c, i, nullptr};
  }

  CnsT cns_with_pos(int depth) {
    for (int tries = 0; tries < 4; ++tries) {
      CnsT c = cns(depth);
      if (!pos_enum(m_, c.c).empty()) return c;
    }
    CnsT c = choose(with_pos_);
    c.t = bind(Sort::Cns, c.c);
    return c;
  }

  CnsT mu_of(const CnsT& c, const DecT& d) {
    auto parts = std::make_shared<const MuParts>(MuParts{c, d});
    return {Term::mu(c.t, d.t), mu(m_, c.c, d.d), c.i, parts};
  }

  CnsT cns(int depth) {
    if (depth <= 1) return var_cns();
    switch (pick(9)) {
      case 0: return var_cns();
      case 1: {
        IdxT i = idx(depth - 1);
        return {Term::eta(i.t), eta(m_, i.i), i.i, nullptr};
      }
      case 2: {
        CnsT c = cns(depth - 1);
        return mu_of(c, dec(c, depth - 1));
      }
      case 3: {
        CnsT c = cns(depth - 2);
        CnsT inner = mu_of(c, dec(c, depth - 2));
        return mu_of(inner, dec(inner, depth - 1));
      }
      case 4: {
        CnsT c0 = cns_with_pos(depth - 1);
        DecT d = dec(c0, depth - 1);
        PosT p = pos(c0, depth - 1);
        return {Term::app(d.t, p.t), d.d.at(p.p), typ(m_, c0.c, p.p), nullptr};
      }
      case 5: {
        // mu-eta-r redex
        CnsT c = cns(depth - 2);
        DecT unit = unit_dec(c);
        return mu_of(c, unit);
      }
      case 6: {
        // mu-eta-l redex around a constant decoration
        CnsT c = cns(depth - 2);
        IdxT i = idx_exact(c.i, depth - 2);
        CnsT e{Term::eta(i.t), eta(m_, c.i), c.i, nullptr};
        DecT d{Term::lam(binder(), c.t), make_dec(pos_enum(m_, e.c), [&](const Value&) { return c.c; })};
        return mu_of(e, d);
      }
      case 7: {
        // beta redex
        CnsT c = cns(depth - 2);
        IdxT i = idx(depth - 2);
        return {Term::app(Term::lam(binder(), c.t), Term::eta_pos(i.t)), c.c, c.i, nullptr};
      }
      default: {
        IdxT i = idx_exact(choose(idx_), depth - 1);
        return {Term::eta(i.t), eta(m_, i.i), i.i, nullptr};
      }
    }
  }

  std::string binder() {
    static const char* names[] = {"x", "y", "z"};
    return names[pick(3)];
  }

  DecT unit_dec(const CnsT& c) {
    std::string x = binder();
    Value d = make_dec(pos_enum(m_, c.c), [&](const Value& p) { return eta(m_, typ(m_, c.c, p)); });
    return {Term::lam(x, Term::eta(Term::typ(c.t, Term::var(x, Sort::Pos)))), d};
  }

  DecT var_dec(const Value& c) {
    auto ps = pos_enum(m_, c);
    std::vector<std::pair<Value, Value>> entries;
    for (const Value& p : ps) {
      Value ti = typ(m_, c, p);
      const auto& cs = cns_at(ti);
      entries.emplace_back(p, cs.empty() ? eta(m_, ti) : choose(cs));
    }
    Value d = Value::dec(entries);
    return {bind(Sort::Dec, d), d};
  }

  DecT dec(const CnsT& c, int depth) {
    switch (depth <= 1 ? 0 : pick(5)) {
      case 0:
      case 1: return var_dec(c.c);
      case 2: return unit_dec(c);
      case 3: {
        DecT d = var_dec(c.c);
        std::string x = binder();
        return {Term::lam(x, Term::app(d.t, Term::var(x, Sort::Pos))), d.d};
      }
      default: {
        // The decoration produced by mu-mu.
        DecT d = var_dec(c.c);
        Value cd = mu(m_, c.c, d.d);
        DecT e = var_dec(cd);
        TrackedMu comp = mu_tracked(m_, c.c, d.d);
        Value v = make_dec(pos_enum(m_, c.c), [&](const Value& p) {
          const Value& dp = d.d.at(p);
          return mu(m_, dp, make_dec(pos_enum(m_, dp), [&](const Value& q) { return e.d.at(comp.position_of(p, q)); }));
        });
        Term xv = Term::var("x", Sort::Pos), yv = Term::var("y", Sort::Pos);
        Term body = Term::mu(Term::app(d.t, xv), Term::lam("y", Term::app(e.t, Term::mu_pos(c.t, d.t, xv, yv))));
        return {Term::lam("x", body), v};
      }
    }
  }

  PosT var_pos(const Value& c) {
    Value p = choose(pos_enum(m_, c));
    return {bind(Sort::Pos, p), p};
  }

  // c must have positions.
  PosT pos(const CnsT& c, int depth) {
    if (depth <= 1) return var_pos(c.c);
    switch (pick(6)) {
      case 0: return var_pos(c.c);
      case 1:
        if (c.t.is(K::Eta)) return {Term::eta_pos(c.t.arg(0)), eta_pos(m_, c.i)};
        return var_pos(c.c);
      case 2:
      case 3: {
        if (!c.parts) return var_pos(c.c);
        const CnsT& c1 = c.parts->c1;
        const DecT& d1 = c.parts->d1;
        if (pick(2) == 0) {
          // mu-pos-eta redex
          PosT r = var_pos(c.c);
          return {Term::mu_pos(c1.t, d1.t, Term::mu_fst(c1.t, d1.t, r.t), Term::mu_snd(c1.t, d1.t, r.t)), r.p};
        }
        std::optional<PosT> pt;
        for (int tries = 0; tries < 3 && !pt; ++tries) {
          PosT cand = pos(c1, depth - 1);
          if (!pos_enum(m_, d1.d.at(cand.p)).empty()) pt = cand;
        }
        if (!pt) {
          std::vector<Value> ps;
          for (const Value& p : pos_enum(m_, c1.c))
            if (!pos_enum(m_, d1.d.at(p)).empty()) ps.push_back(p);
          if (ps.empty()) return var_pos(c.c);
          pt = at_pos(c1, choose(ps), depth - 1);
        }
        Value ti = typ(m_, c1.c, pt->p);
        Value dp = d1.d.at(pt->p);
        PosT qt{Term::var("_", Sort::Pos), Value::unit()};
        if (dp == eta(m_, ti) && pick(2) == 0) {
          qt = {Term::eta_pos(Term::typ(c1.t, pt->t)), eta_pos(m_, ti)};
        } else {
          CnsT owner{Term::app(d1.t, pt->t), dp, ti, nullptr};
          qt = pos(owner, depth - 1);
        }
        return {Term::mu_pos(c1.t, d1.t, pt->t, qt.t), mu_pos(m_, c1.c, d1.d, pt->p, qt.p)};
      }
      default: {
        // mu-pos-fst / mu-pos-snd redex
        DecT d = var_dec(c.c);
        std::vector<Value> ps;
        for (const Value& p : pos_enum(m_, c.c))
          if (!pos_enum(m_, d.d.at(p)).empty()) ps.push_back(p);
        if (ps.empty()) return var_pos(c.c);
        Value p = choose(ps);
        PosT pt = at_pos(c, p, depth - 1);
        PosT qt = var_pos(d.d.at(p));
        Term pair = Term::mu_pos(c.t, d.t, pt.t, qt.t);
        return {Term::mu_fst(c.t, d.t, pair), p};
      }
    }
  }

  // A term for the specific position p of c.
  PosT at_pos(const CnsT& c, const Value& p, int depth) {
    if (depth > 1 && c.t.is(K::Eta) && pick(2) == 0) return {Term::eta_pos(c.t.arg(0)), p};
    return {bind(Sort::Pos, p), p};
  }

  MonadCode m_;
  std::size_t bound_;
  std::mt19937_64 rng_;
  std::vector<Value> idx_;
  std::unordered_map<Value, std::vector<Value>, ValueHash> cns_;
  std::vector<CnsT> with_pos_;
  Env env_;
  int counter_ = 0;
};

}  // namespace

Value interpret_term(const MonadCode& m, const Env& env, const Term& t) {
  Interp in(m, env);
  return in.eval(t);
}

ClosedTerm random_closed_term(const MonadCode& m, std::size_t bound, int depth, std::uint64_t seed) {
  TypedGen g(m, bound, seed);
  return g.top(depth < 1 ? 1 : depth);
}

}  // namespace opetopic
