#include "opetopic/term.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "opetopic/error.hpp"
#include "opetopic/sexpr.hpp"

namespace opetopic {

std::string_view sort_name(Sort s) {
  switch (s) {
    case Sort::Idx: return "idx";
    case Sort::Cns: return "cns";
    case Sort::Pos: return "pos";
    case Sort::Dec: return "dec";
    case Sort::Opaque: return "opaque";
  }
  return "?";
}

namespace {

const char* keyword(TermKind k) {
  switch (k) {
    case TermKind::Var: return "var";
    case TermKind::Eta: return "eta";
    case TermKind::Mu: return "mu";
    case TermKind::Typ: return "typ";
    case TermKind::EtaPos: return "eta-pos";
    case TermKind::MuPos: return "mu-pos";
    case TermKind::MuFst: return "mu-fst";
    case TermKind::MuSnd: return "mu-snd";
    case TermKind::Lam: return "lam";
    case TermKind::App: return "app";
    case TermKind::EtaPosElim: return "eta-elim";
  }
  return "?";
}

void expect(const Term& t, Sort s, const char* where) {
  if (t.sort() != s)
    throw SortError(std::string(where) + ": expected " + std::string(sort_name(s)) + ", got " +
                    std::string(sort_name(t.sort())) + " in " + t.to_string());
}

// Free occurrences of `name` must all have sort `s`.
void check_var_sort(const Term& t, const std::string& name, Sort s) {
  switch (t.kind()) {
    case TermKind::Var:
      if (t.name() == name && t.sort() != s)
        throw SortError("variable " + name + " used at sort " + std::string(sort_name(t.sort())) +
                        " where " + std::string(sort_name(s)) + " is required");
      return;
    case TermKind::Lam:
      if (t.name() == name) return;
      break;
    default:
      break;
  }
  for (const Term& a : t.args()) check_var_sort(a, name, s);
}

}  // namespace

Term Term::make(TermKind kind, Sort sort, std::string name, std::vector<Term> args) {
  std::size_t size = 1, depth = 0;
  for (const Term& a : args) {
    size += a.size();
    depth = std::max(depth, a.depth() + 1);
  }
  return Term(std::make_shared<const Node>(
      Node{kind, sort, std::move(name), std::move(args), size, depth}));
}

Term Term::var(std::string name, Sort sort) { return make(TermKind::Var, sort, std::move(name), {}); }

Term Term::eta(Term idx) {
  expect(idx, Sort::Idx, "eta");
  return make(TermKind::Eta, Sort::Cns, "", {std::move(idx)});
}

Term Term::mu(Term cns, Term dec) {
  expect(cns, Sort::Cns, "mu");
  expect(dec, Sort::Dec, "mu");
  return make(TermKind::Mu, Sort::Cns, "", {std::move(cns), std::move(dec)});
}

Term Term::typ(Term cns, Term pos) {
  expect(cns, Sort::Cns, "typ");
  expect(pos, Sort::Pos, "typ");
  return make(TermKind::Typ, Sort::Idx, "", {std::move(cns), std::move(pos)});
}

Term Term::eta_pos(Term idx) {
  expect(idx, Sort::Idx, "eta-pos");
  return make(TermKind::EtaPos, Sort::Pos, "", {std::move(idx)});
}

Term Term::mu_pos(Term cns, Term dec, Term p, Term q) {
  expect(cns, Sort::Cns, "mu-pos");
  expect(dec, Sort::Dec, "mu-pos");
  expect(p, Sort::Pos, "mu-pos");
  expect(q, Sort::Pos, "mu-pos");
  return make(TermKind::MuPos, Sort::Pos, "", {std::move(cns), std::move(dec), std::move(p), std::move(q)});
}

Term Term::mu_fst(Term cns, Term dec, Term pos) {
  expect(cns, Sort::Cns, "mu-fst");
  expect(dec, Sort::Dec, "mu-fst");
  expect(pos, Sort::Pos, "mu-fst");
  return make(TermKind::MuFst, Sort::Pos, "", {std::move(cns), std::move(dec), std::move(pos)});
}

Term Term::mu_snd(Term cns, Term dec, Term pos) {
  expect(cns, Sort::Cns, "mu-snd");
  expect(dec, Sort::Dec, "mu-snd");
  expect(pos, Sort::Pos, "mu-snd");
  return make(TermKind::MuSnd, Sort::Pos, "", {std::move(cns), std::move(dec), std::move(pos)});
}

Term Term::lam(std::string binder, Term body) {
  if (!sexpr::is_name(binder)) throw SortError("lam: invalid binder name '" + binder + "'");
  expect(body, Sort::Cns, "lam body");
  check_var_sort(body, binder, Sort::Pos);
  return make(TermKind::Lam, Sort::Dec, std::move(binder), {std::move(body)});
}

Term Term::app(Term dec, Term pos) {
  expect(dec, Sort::Dec, "app");
  expect(pos, Sort::Pos, "app");
  return make(TermKind::App, Sort::Cns, "", {std::move(dec), std::move(pos)});
}

Term Term::eta_pos_elim(Term idx, Term val, Term pos) {
  expect(idx, Sort::Idx, "eta-elim");
  expect(val, Sort::Opaque, "eta-elim");
  expect(pos, Sort::Pos, "eta-elim");
  return make(TermKind::EtaPosElim, Sort::Opaque, "", {std::move(idx), std::move(val), std::move(pos)});
}

Term Term::with_args(std::vector<Term> a) const {
  switch (kind()) {
    case TermKind::Var: return *this;
    case TermKind::Eta: return eta(std::move(a.at(0)));
    case TermKind::Mu: return mu(std::move(a.at(0)), std::move(a.at(1)));
    case TermKind::Typ: return typ(std::move(a.at(0)), std::move(a.at(1)));
    case TermKind::EtaPos: return eta_pos(std::move(a.at(0)));
    case TermKind::MuPos: return mu_pos(std::move(a.at(0)), std::move(a.at(1)), std::move(a.at(2)), std::move(a.at(3)));
    case TermKind::MuFst: return mu_fst(std::move(a.at(0)), std::move(a.at(1)), std::move(a.at(2)));
    case TermKind::MuSnd: return mu_snd(std::move(a.at(0)), std::move(a.at(1)), std::move(a.at(2)));
    case TermKind::Lam: return lam(name(), std::move(a.at(0)));
    case TermKind::App: return app(std::move(a.at(0)), std::move(a.at(1)));
    case TermKind::EtaPosElim: return eta_pos_elim(std::move(a.at(0)), std::move(a.at(1)), std::move(a.at(2)));
  }
  return *this;
}

std::string Term::to_string() const {
  std::string out = "(";
  out += keyword(kind());
  if (kind() == TermKind::Var) {
    out += " " + name() + " " + std::string(sort_name(sort())) + ")";
    return out;
  }
  if (kind() == TermKind::Lam) out += " " + name();
  for (const Term& a : args()) out += " " + a.to_string();
  return out + ")";
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.sort() != b.sort() || a.name() != b.name() || a.size() != b.size())
    return false;
  for (std::size_t k = 0; k < a.args().size(); ++k)
    if (!(a.args()[k] == b.args()[k])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

Sort parse_sort(const sexpr::Datum& d) {
  if (!d.is_list) {
    if (d.atom == "idx") return Sort::Idx;
    if (d.atom == "cns") return Sort::Cns;
    if (d.atom == "pos") return Sort::Pos;
    if (d.atom == "dec") return Sort::Dec;
    if (d.atom == "opaque") return Sort::Opaque;
  }
  throw ParseError("unknown sort '" + d.to_string() + "'", d.offset);
}

std::string parse_name(const sexpr::Datum& d) {
  if (d.is_list || !sexpr::is_name(d.atom)) throw ParseError("expected a name", d.offset);
  return d.atom;
}

Term build(const sexpr::Datum& d);

Term build_checked(const sexpr::Datum& d) {
  try {
    return build(d);
  } catch (const SortError& e) {
    // Report the innermost offending subterm only once.
    std::string msg = e.what();
    if (msg.find(" [at offset ") != std::string::npos) throw;
    throw SortError(msg + " [at offset " + std::to_string(d.offset) + ": " + d.to_string() + "]");
  }
}

Term build(const sexpr::Datum& d) {
  if (!d.is_list || d.items.empty() || d.items[0].is_list)
    throw ParseError("expected a term form", d.offset);
  const std::string& head = d.items[0].atom;
  auto arity = [&](std::size_t n) {
    if (d.items.size() != n + 1)
      throw ParseError("'" + head + "' expects " + std::to_string(n) + " arguments", d.offset);
  };
  auto sub = [&](std::size_t k) { return build_checked(d.items[k]); };

  if (head == "var") {
    arity(2);
    return Term::var(parse_name(d.items[1]), parse_sort(d.items[2]));
  }
  if (head == "eta") { arity(1); return Term::eta(sub(1)); }
  if (head == "mu") { arity(2); return Term::mu(sub(1), sub(2)); }
  if (head == "typ") { arity(2); return Term::typ(sub(1), sub(2)); }
  if (head == "eta-pos") { arity(1); return Term::eta_pos(sub(1)); }
  if (head == "mu-pos") { arity(4); return Term::mu_pos(sub(1), sub(2), sub(3), sub(4)); }
  if (head == "mu-fst") { arity(3); return Term::mu_fst(sub(1), sub(2), sub(3)); }
  if (head == "mu-snd") { arity(3); return Term::mu_snd(sub(1), sub(2), sub(3)); }
  if (head == "lam") { arity(2); return Term::lam(parse_name(d.items[1]), sub(2)); }
  if (head == "app") { arity(2); return Term::app(sub(1), sub(2)); }
  if (head == "eta-elim") { arity(3); return Term::eta_pos_elim(sub(1), sub(2), sub(3)); }
  throw ParseError("unknown term form '" + head + "'", d.offset);
}

}  // namespace

Term parse_term(std::string_view text) { return build_checked(sexpr::parse(text)); }

// ---------------------------------------------------------------------------
// Binders

namespace {

bool alpha_rec(const Term& a, const Term& b, std::map<std::string, int>& env_a,
               std::map<std::string, int>& env_b, int level) {
  if (a.kind() != b.kind() || a.sort() != b.sort()) return false;
  if (a.kind() == TermKind::Var) {
    auto ia = env_a.find(a.name());
    auto ib = env_b.find(b.name());
    bool bound_a = ia != env_a.end(), bound_b = ib != env_b.end();
    if (bound_a != bound_b) return false;
    if (bound_a) return ia->second == ib->second;
    return a.name() == b.name();
  }
  if (a.kind() == TermKind::Lam) {
    auto save_a = env_a.find(a.name()) != env_a.end() ? std::optional<int>(env_a[a.name()]) : std::nullopt;
    auto save_b = env_b.find(b.name()) != env_b.end() ? std::optional<int>(env_b[b.name()]) : std::nullopt;
    env_a[a.name()] = level;
    env_b[b.name()] = level;
    bool r = alpha_rec(a.arg(0), b.arg(0), env_a, env_b, level + 1);
    if (save_a) env_a[a.name()] = *save_a; else env_a.erase(a.name());
    if (save_b) env_b[b.name()] = *save_b; else env_b.erase(b.name());
    return r;
  }
  for (std::size_t k = 0; k < a.args().size(); ++k)
    if (!alpha_rec(a.arg(k), b.arg(k), env_a, env_b, level)) return false;
  return true;
}

void free_rec(const Term& t, std::set<std::string>& bound, std::set<std::string>& out) {
  if (t.kind() == TermKind::Var) {
    if (!bound.count(t.name())) out.insert(t.name());
    return;
  }
  if (t.kind() == TermKind::Lam) {
    bool fresh = bound.insert(t.name()).second;
    free_rec(t.arg(0), bound, out);
    if (fresh) bound.erase(t.name());
    return;
  }
  for (const Term& a : t.args()) free_rec(a, bound, out);
}

}  // namespace

bool alpha_eq(const Term& a, const Term& b) {
  if (a == b) return true;
  if (a.size() != b.size()) return false;
  std::map<std::string, int> ea, eb;
  return alpha_rec(a, b, ea, eb, 0);
}

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> bound, out;
  free_rec(t, bound, out);
  return out;
}

bool occurs_free(const Term& t, const std::string& name) {
  switch (t.kind()) {
    case TermKind::Var: return t.name() == name;
    case TermKind::Lam: return t.name() != name && occurs_free(t.arg(0), name);
    default:
      for (const Term& a : t.args())
        if (occurs_free(a, name)) return true;
      return false;
  }
}

void collect_names(const Term& t, std::set<std::string>& out) {
  if (t.kind() == TermKind::Var || t.kind() == TermKind::Lam) out.insert(t.name());
  for (const Term& a : t.args()) collect_names(a, out);
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int k = 1;; ++k) {
    std::string cand = base + std::to_string(k);
    if (!avoid.count(cand)) return cand;
  }
}

namespace {

Term subst_rec(const Term& t, const std::string& var, const Term& arg, const std::set<std::string>& arg_fv) {
  switch (t.kind()) {
    case TermKind::Var:
      if (t.name() != var) return t;
      if (t.sort() != arg.sort())
        throw SortError("substitute: " + var + " has sort " + std::string(sort_name(t.sort())) +
                        " but replacement has sort " + std::string(sort_name(arg.sort())));
      return arg;
    case TermKind::Lam: {
      if (t.name() == var || !occurs_free(t.arg(0), var)) return t;
      if (arg_fv.count(t.name())) {
        std::set<std::string> avoid = arg_fv;
        collect_names(t.arg(0), avoid);
        avoid.insert(var);
        std::string fresh = fresh_name(t.name(), avoid);
        Term renamed = subst_rec(t.arg(0), t.name(), Term::var(fresh, Sort::Pos), {fresh});
        return Term::lam(fresh, subst_rec(renamed, var, arg, arg_fv));
      }
      return Term::lam(t.name(), subst_rec(t.arg(0), var, arg, arg_fv));
    }
    default: {
      if (!occurs_free(t, var)) return t;
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) args.push_back(subst_rec(a, var, arg, arg_fv));
      return t.with_args(std::move(args));
    }
  }
}

}  // namespace

Term substitute(const Term& body, const std::string& var, const Term& arg) {
  return subst_rec(body, var, arg, free_vars(arg));
}

}  // namespace opetopic
