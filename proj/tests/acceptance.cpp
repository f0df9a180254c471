// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion ...]   (default: all)

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "opetopic/algebra.hpp"
#include "opetopic/dep_monad.hpp"
#include "opetopic/error.hpp"
#include "opetopic/interpret.hpp"
#include "opetopic/monad.hpp"
#include "opetopic/opetope.hpp"
#include "opetopic/rewrite.hpp"
#include "opetopic/term_gen.hpp"
#include "oracles.hpp"

using namespace opetopic;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) note << "failed: ";
      else note << "; ";
      note << what;
      pass = false;
    }
  }
};

FamilyRef two_over(const Value& i, const char* a, const char* b) {
  FamilyTable t;
  t[i] = {Value::atom(a), Value::atom(b)};
  return FamilyRef::table("T", t);
}

std::vector<MonadCode> law_codes() {
  MonadCode s = MonadCode::slice(MonadCode::id());
  return {MonadCode::id(), MonadCode::pb(MonadCode::id(), two_over(Value(), "a", "b")), s, MonadCode::slice(s),
          MonadCode::pb(s, two_over(Value::pair(Value(), Value()), "x", "y"))};
}

Extension ext_over(std::size_t n) {
  std::vector<std::string> el;
  for (std::size_t k = 0; k < n; ++k) el.push_back("a" + std::to_string(k));
  return Extension{MonadCode::id(), DepMonadCode::id(make_set("A", el))};
}

MonoidSpec table(std::vector<std::string> el, std::string unit, std::vector<std::vector<std::string>> mul) {
  return MonoidSpec{make_set("M", std::move(el)), std::move(unit), std::move(mul)};
}

void confluence(Outcome& o) {
  auto t0 = Clock::now();
  std::vector<CriticalPair> cps = critical_pairs();
  o.require(cps.size() >= 5, "fewer than five critical pairs");
  std::size_t joined = 0;
  for (const CriticalPair& cp : cps) {
    bool left = false, right = false;
    for (const StepResult& s : all_steps(cp.peak)) {
      left |= s.rule == cp.left_rule && alpha_eq(s.term, cp.left_reduct);
      right |= s.rule == cp.right_rule && alpha_eq(s.term, cp.right_reduct);
    }
    o.require(left && right, cp.name + " reducts are not one step from the peak");
    JoinReport jr = check_joinable(cp, kJoinBudget);
    o.require(jr.joined, cp.name + " does not join");
    joined += jr.joined;
    if (cp.name == "CP1")
      o.require(jr.meet && alpha_eq(*jr.meet, Term::eta(Term::var("i", Sort::Idx))), "CP1 meet is not Eta(i)");
    if (cp.name == "CP2")
      o.require(jr.meet && alpha_eq(*jr.meet, Term::mu(Term::var("c", Sort::Cns), Term::var("d", Sort::Dec))),
                "CP2 meet is not Mu(c, d)");
  }
  FuzzReport f = fuzz_confluence(10000, 6, 7);
  o.require(f.agreed == f.terms && f.terms == 10000, "fuzzed normal forms disagree");
  o.require(f.exhausted == 0, "fuzz exhausted the step budget");
  double secs = since(t0);
  o.require(secs < 120, "runtime over 2 minutes");
  o.note << (o.pass ? "" : " | ") << joined << "/" << cps.size() << " pairs joined, fuzz " << f.agreed << "/"
         << f.terms << " agree, max " << f.max_steps << " steps, " << secs << " s";
}

void termination(Outcome& o) {
  FuzzReport f = fuzz_confluence(10000, 8, 11, kDefaultBudget);
  o.require(f.exhausted == 0, std::to_string(f.exhausted) + " terms exhausted 1e5 steps");
  o.require(f.max_steps <= kDefaultBudget, "step count over 1e5");
  o.note << (o.pass ? "" : " | ") << f.terms << " depth-8 terms, max " << f.max_steps << " steps";
}

void monad_laws(Outcome& o) {
  std::size_t checked = 0;
  for (const MonadCode& m : law_codes()) {
    oracle::LawReport r = oracle::monad_laws(m, 4);
    for (const char* law : {"typ-eta", "mu-eta-l", "mu-eta-r", "typ-mu", "mu-pos-fst", "mu-pos-snd", "mu-pos-eta",
                            "mu-mu"}) {
      auto it = r.find(law);
      o.require(it != r.end() && it->second.checked > 0, m.to_string() + " " + law + " not checked");
      if (it != r.end())
        o.require(it->second.failures == 0, m.to_string() + " " + law + ": " + it->second.first_failure);
    }
    checked += oracle::total_checked(r);
  }
  o.note << (o.pass ? "" : " | ") << checked << " law instances on 5 monads, trees <= 4";
}

void cartesian(Outcome& o) {
  std::size_t checked = 0;
  for (const MonadCode& m : law_codes()) {
    oracle::LawReport r = oracle::cartesian_laws(m, 4);
    for (const auto& [law, t] : r) o.require(t.failures == 0, m.to_string() + " " + law + ": " + t.first_failure);
    o.require(r.count("pos-count") && r.at("pos-count").checked > 0, m.to_string() + " pos-count not checked");
    checked += oracle::total_checked(r);
  }
  o.note << (o.pass ? "" : " | ") << checked << " instances";
}

void coherence(Outcome& o) {
  std::vector<MonadCode> codes = law_codes();
  std::size_t steps = 0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const MonadCode& m = codes[k % codes.size()];
    ClosedTerm ct = random_closed_term(m, 2, 6, 1000 + k);
    for (const StepResult& s : all_steps(ct.term)) {
      ++steps;
      bool same = false;
      try {
        same = interpret_term(m, ct.env, s.term) == ct.value;
      } catch (const Error& e) {
        o.require(false, "seed " + std::to_string(1000 + k) + ": " + e.what());
        continue;
      }
      o.require(same, "seed " + std::to_string(1000 + k) + " changes value under " +
                          std::string(rule_name(s.rule)));
    }
  }
  o.note << (o.pass ? "" : " | ") << "1000 terms, " << steps << " steps";
}

void weak_algebras(Outcome& o) {
  Bounds b{4, 2, 10, 1};
  for (std::size_t n : {2, 3}) {
    FamilyStack s = monoid_families(cyclic_monoid(n), 2);
    FibrancyReport r = fibrancy_check(s, 2, b);
    o.require(r.holds && r.levels.size() == 2, "Z/" + std::to_string(n) + " not multiplicative at levels 1-2");
    o.require(check_unit_coherence(s, b).failures == 0, "Z/" + std::to_string(n) + " unit coherence");
    o.require(check_mu_coherence(s, b).failures == 0, "Z/" + std::to_string(n) + " mu coherence");
  }
  MonoidSpec non_assoc = table({"e", "a", "b"}, "e", {{"e", "a", "b"}, {"a", "b", "a"}, {"b", "a", "a"}});
  MonoidSpec non_unital = cyclic_monoid(2);
  non_unital.unit = "1";
  for (const MonoidSpec& spec : {non_assoc, non_unital}) {
    FibrancyReport r = fibrancy_check(monoid_families(spec, 2), 2, b);
    bool tree = r.levels.size() == 2 && !r.levels[1].counterexamples.empty() &&
                (r.levels[1].counterexamples[0].cns.is(ValueKind::Node) ||
                 r.levels[1].counterexamples[0].cns.is(ValueKind::Leaf));
    o.require(!r.holds && r.levels[0].holds && !r.levels[1].holds && tree, "bad table not caught at level 2");
  }
  // Every table on one and two elements against the all-triples oracle.
  std::size_t tables = 0, agree = 0;
  for (std::size_t size : {1, 2}) {
    std::vector<std::string> el{"p", "q"};
    el.resize(size);
    std::size_t cells = size * size, combos = 1;
    for (std::size_t k = 0; k < cells; ++k) combos *= size;
    for (std::size_t code = 0; code < combos; ++code)
      for (const std::string& unit : el) {
        std::vector<std::vector<std::string>> mul(size, std::vector<std::string>(size));
        for (std::size_t k = 0, rest = code; k < cells; ++k, rest /= size) mul[k / size][k % size] = el[rest % size];
        MonoidSpec spec = table(el, unit, mul);
        ++tables;
        agree += fibrancy_check(monoid_families(spec, 2), 2, Bounds{3, 2, 1, 1}).holds == oracle::is_monoid(spec);
      }
  }
  for (const MonoidSpec& spec : {cyclic_monoid(2), cyclic_monoid(3), non_assoc, non_unital}) {
    ++tables;
    agree += fibrancy_check(monoid_families(spec, 2), 2, b).holds == oracle::is_monoid(spec);
  }
  o.require(agree == tables, "fibrancy disagrees with the table oracle");
  o.note << (o.pass ? "" : " | ") << agree << "/" << tables << " tables agree with the table oracle";
}

void lifts(Outcome& o) {
  std::size_t instances = 0, agree = 0;
  double last = 0;
  for (std::size_t n : {1, 2, 3}) {
    auto t0 = Clock::now();
    Extension e1 = next_extension(ext_over(n));
    AlgReport r = isalgebraic_check(e1, Bounds{3, 2, 10, 1});
    o.require(r.holds && r.checked > 0, "isalgebraic fails at |A| = " + std::to_string(n));
    for (const Value& i : idx_enum(e1.m, 3))
      for (const Value& sigma : cns_enum(e1.m, i, 3)) {
        auto phis = all_decorations(pos_enum(e1.m, sigma),
                                    [&](const Value& p) { return didx_enum(e1.md, typ(e1.m, sigma, p)); });
        for (const Value& phi : phis) {
          ++instances;
          std::vector<LiftResult> all = brute_force_lifts(e1, sigma, phi);
          LiftResult l = pushforward_lift(e1, sigma, phi);
          agree += all.size() == 1 && l.zeta && l.omega == all[0].omega && l.sigma_down == all[0].sigma_down;
        }
      }
    last = since(t0);
  }
  o.require(instances > 0 && agree == instances, "lift disagrees with the brute-force lift");
  o.require(last < 300, "runtime over 5 minutes at |A| = 3");
  o.note << (o.pass ? "" : " | ") << agree << "/" << instances << " lifts agree, " << last << " s at |A| = 3";
}

void groupoids(Outcome& o) {
  for (std::size_t n : {1, 2})
    o.require(groupoid_check(ext_over(n).md.carrier(), 2, Bounds{3, 2, 10, 1}).holds,
              "groupoid levels 1-2 at |A| = " + std::to_string(n));
  o.require(groupoid_check(ext_over(3).md.carrier(), 1, Bounds{3, 1, 10, 1}).holds, "groupoid level 1 at |A| = 3");
  std::size_t fibers = 0;
  for (std::size_t n : {1, 2, 3}) {
    Extension e1 = next_extension(ext_over(n));
    FamilyRef oracle_fam = over_optype_family(ext_over(n), 1);
    for (const Value& i : idx_enum(e1.m, 1)) {
      const Value& target = i.fst().snd();
      const Value& source = i.snd().snd().at(Value());
      std::size_t want = target == source ? 1 : 0;
      o.require(didx_enum(e1.md, i).size() == want && family_at(oracle_fam, i).size() == want,
                "arrow fiber " + i.to_string());
      ++fibers;
    }
  }
  o.note << (o.pass ? "" : " | ") << fibers << " arrow fibers match";
}

void opetopes(Outcome& o) {
  for (std::size_t n = 0; n <= 6; ++n)
    o.require(enumerate_opetopes(1, n).total() == n + 1, "dimension 1 at size " + std::to_string(n));
  const std::size_t bound = 4;
  OpetopeListing d2 = enumerate_opetopes(2, bound);
  std::size_t expect = 0;
  for (std::size_t n = 0; n <= bound; ++n)
    for (std::size_t l = 0; l <= bound; ++l) expect += oracle::planar_trees(n, l, bound);
  o.require(d2.total() == expect, "dimension 2 total");
  for (const OpetopeGroup& g : d2.groups) {
    std::size_t leaves = tree_nodes(g.index.snd());
    std::size_t want = 0;
    for (std::size_t n = 0; n <= bound; ++n) want += oracle::planar_trees(n, leaves, bound);
    o.require(g.shapes.size() == want, "dimension 2 with " + std::to_string(leaves) + " leaves");
  }
  o.note << (o.pass ? "" : " | ") << "dimension 2: " << d2.total() << " shapes, oracle " << expect;
}

struct Criterion {
  const char* name;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {"confluence", confluence},     {"termination", termination},   {"monad laws", monad_laws},
      {"cartesianness", cartesian},   {"rewrite/semantics", coherence}, {"weak algebras", weak_algebras},
      {"algebraic lifts", lifts}, {"groupoids", groupoids},   {"opetopes", opetopes}};
  std::set<std::size_t> pick;
  for (int k = 1; k < argc; ++k) pick.insert(std::stoul(argv[k]));
  int failed = 0;
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (!pick.empty() && !pick.count(k + 1)) continue;
    Outcome o;
    auto t0 = Clock::now();
    try {
      all[k].run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", k + 1, all[k].name, o.note.str().c_str(),
                since(t0));
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
