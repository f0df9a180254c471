#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace opetopic {

enum class Sort { Idx, Cns, Pos, Dec, Opaque };

std::string_view sort_name(Sort s);

enum class TermKind {
  Var,
  Eta,
  Mu,
  Typ,
  EtaPos,
  MuPos,
  MuFst,
  MuSnd,
  Lam,
  App,
  EtaPosElim,
};

// Immutable, sorted term of the monad-law calculus.  Copies share
// structure.  The smart constructors enforce the sort discipline and throw
// SortError on violation.
//
// MuPos/MuFst/MuSnd carry the constructor and decoration they range over
// as their first two arguments.
class Term {
 public:
  static Term var(std::string name, Sort sort);
  static Term eta(Term idx);
  static Term mu(Term cns, Term dec);
  static Term typ(Term cns, Term pos);
  static Term eta_pos(Term idx);
  static Term mu_pos(Term cns, Term dec, Term p, Term q);
  static Term mu_fst(Term cns, Term dec, Term pos);
  static Term mu_snd(Term cns, Term dec, Term pos);
  static Term lam(std::string binder, Term body);
  static Term app(Term dec, Term pos);
  static Term eta_pos_elim(Term idx, Term val, Term pos);

  // Rebuilds a term of the same kind and name with new children.
  Term with_args(std::vector<Term> args) const;

  TermKind kind() const { return node_->kind; }
  Sort sort() const { return node_->sort; }
  // Variable name, or binder name for Lam.
  const std::string& name() const { return node_->name; }
  const std::vector<Term>& args() const { return node_->args; }
  const Term& arg(std::size_t k) const { return node_->args.at(k); }
  std::size_t size() const { return node_->size; }
  std::size_t depth() const { return node_->depth; }

  bool is(TermKind k) const { return kind() == k; }

  std::string to_string() const;

  // Syntactic identity, binder names included.  See alpha_eq for the
  // binder-insensitive comparison.
  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node {
    TermKind kind;
    Sort sort;
    std::string name;
    std::vector<Term> args;
    std::size_t size;
    std::size_t depth;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Term make(TermKind kind, Sort sort, std::string name, std::vector<Term> args);

  std::shared_ptr<const Node> node_;
};

Term parse_term(std::string_view text);

bool alpha_eq(const Term& a, const Term& b);

std::set<std::string> free_vars(const Term& t);
bool occurs_free(const Term& t, const std::string& name);
// Every name occurring in t, free or bound.
void collect_names(const Term& t, std::set<std::string>& out);

// A name starting with `base` that is not in `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

// Capture-avoiding substitution of arg for the free occurrences of var.
// Throws SortError when an occurrence's sort differs from arg's sort.
Term substitute(const Term& body, const std::string& var, const Term& arg);

}  // namespace opetopic
