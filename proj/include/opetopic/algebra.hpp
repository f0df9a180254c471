#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "opetopic/code.hpp"
#include "opetopic/value.hpp"

namespace opetopic {

struct Bounds {
  std::size_t size = 3;  // tree nodes and base constructor size
  int levels = 2;
  std::size_t max_counterexamples = 10;
  unsigned jobs = 1;
};

// X_0 .. X_n with X_k a family over M_k, where M_0 = m0 and
// M_{k+1} = Slice (Pb M_k X_k).
struct FamilyStack {
  MonadCode m0;
  std::vector<FamilyRef> families;

  // M_k; requires k <= families.size().
  MonadCode monad(std::size_t k) const;
};

struct Counterexample {
  Value index;
  Value cns;
  Value dec;
  std::size_t fiber_size = 0;
  std::string detail;
};

// holds iff failures == 0.  Counterexamples are the first failures in
// enumeration order.
struct CheckReport {
  bool holds = true;
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::vector<Counterexample> counterexamples;
};

using MultReport = CheckReport;
using AlgReport = CheckReport;

// For every (i, c, nu) with nu p in X0 (typ c p), the number of pairs
// (x, w) with x in X0 i and w in X1 ((i, x), (c, nu)) must be 1.
MultReport ismult_check(const MonadCode& m, const FamilyRef& x0, const FamilyRef& x1, const Bounds& b = {});

// The unique x, and its witness in X1.  Throw EvalError naming (i, c, nu)
// when the fiber is not a singleton.
Value alpha(const MonadCode& m, const FamilyRef& x0, const FamilyRef& x1, const Value& i, const Value& c,
            const Value& nu);
Value alpha_wit(const MonadCode& m, const FamilyRef& x0, const FamilyRef& x1, const Value& i, const Value& c,
                const Value& nu);

// The element of X1 ((i, x), eta) given by the X2 fiber over the leaf.
Value eta_alg(const MonadCode& m, const FamilyRef& x0, const FamilyRef& x1, const FamilyRef& x2, const Value& i,
              const Value& x);
// delta p is a Pb constructor (c' p, nu' p) at (typ c p, nu p); x1 is in
// X1 ((i, x0), (c, nu)) and xbar p in X1 ((typ c p, nu p), delta p).
// Returns the element of X1 ((i, x0), mu ((c, nu), delta)).
Value mu_alg(const MonadCode& m, const FamilyRef& x0, const FamilyRef& x1, const FamilyRef& x2, const Value& i,
             const Value& c, const Value& nu, const Value& delta, const Value& x0v, const Value& x1v,
             const Value& xbar);

// alpha (eta i) (eta-dec x) = x, for every i and x.
CheckReport check_unit_coherence(const FamilyStack& s, const Bounds& b = {});
// alpha (mu c' delta') nu'' = alpha c' (p -> alpha (delta' p) (nu' p)), where
// nu'' is the composite decoration, and mu_alg lands in the same fiber.
// Inputs are bounded by the size of the composite.
CheckReport check_mu_coherence(const FamilyStack& s, const Bounds& b = {});

// For every (i, c, nu) with nu p in Idx-down (typ c p), the number of
// (j, d) with j over i, d over c and typ-down d p = nu p must be 1.
AlgReport isalgebraic_check(const Extension& ext, const Bounds& b = {});

struct LiftResult {
  Value omega;
  Value sigma_down;
  bool zeta = false;
};

// The lift of (sigma, phi) for ext = next_extension(e), built by induction
// on sigma.  phi maps the nodes of sigma to dependent indices.  Throws
// EvalError when phi does not fit sigma.
LiftResult pushforward_lift(const Extension& ext, const Value& sigma, const Value& phi);
// Every (omega, sigma_down) over (sigma, phi), by search.
std::vector<LiftResult> brute_force_lifts(const Extension& ext, const Value& sigma, const Value& phi);

struct FibrancyReport {
  bool holds = true;
  int first_level = 1;
  std::vector<MultReport> levels;  // levels[k] is level first_level + k
};

// ismult at each level first..levels: level k checks (M_{k-1}, X_{k-1}, X_k).
// pre_cat starts at level 2.
FibrancyReport fibrancy_check(const FamilyStack& s, int levels, const Bounds& b = {}, bool pre_cat = false);
// X_k = Idx-down of the k-th slice of ext.
FamilyStack over_optype_stack(const Extension& ext, int levels);

struct MonoidSpec {
  FiniteSetSpec carrier;
  std::string unit;
  // mul[a][b], indexed by position in carrier.elements.
  std::vector<std::vector<std::string>> mul;

  std::string product(const std::string& a, const std::string& b) const;
  // unit * a1 * ... * an, associated to the left.
  std::string fold(const std::vector<std::string>& xs) const;
};

// Throws EvalError unless the table is total over the carrier and the
// unit is an element.
void validate(const MonoidSpec& spec);
MonoidSpec cyclic_monoid(std::size_t n);

// X0 the carrier over Slice Id, X1 the graph of the fold, X2 and above
// the unit family.
FamilyStack monoid_families(const MonoidSpec& spec, int levels = 2);

FibrancyReport groupoid_check(const FiniteSetSpec& a, int levels, const Bounds& b = {});

}  // namespace opetopic
