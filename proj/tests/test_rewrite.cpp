#include "doctest.h"

#include <map>
#include <set>

#include "opetopic/interpret.hpp"
#include "opetopic/monad.hpp"
#include "opetopic/rewrite.hpp"
#include "opetopic/term_gen.hpp"

using namespace opetopic;

namespace {

Term T(const char* s) { return parse_term(s); }

// Hand-written reduct of each rule on a representative redex.
const std::map<std::string, std::pair<const char*, const char*>> kCases = {
    {"typ-eta", {"(typ (eta (var j idx)) (var q pos))", "(var j idx)"}},
    {"typ-mu",
     {"(typ (mu (var c cns) (var d dec)) (var p pos))",
      "(typ (app (var d dec) (mu-fst (var c cns) (var d dec) (var p pos))) (mu-snd (var c cns) (var d dec) (var p "
      "pos)))"}},
    {"mu-pos-fst",
     {"(mu-fst (var c cns) (var d dec) (mu-pos (var c cns) (var d dec) (var a pos) (var b pos)))", "(var a pos)"}},
    {"mu-pos-snd",
     {"(mu-snd (var c cns) (var d dec) (mu-pos (var c cns) (var d dec) (var a pos) (var b pos)))", "(var b pos)"}},
    {"mu-pos-eta",
     {"(mu-pos (var c cns) (var d dec) (mu-fst (var c cns) (var d dec) (var r pos)) (mu-snd (var c cns) (var d "
      "dec) (var r pos)))",
      "(var r pos)"}},
    {"mu-eta-r", {"(mu (var k cns) (lam z (eta (typ (var k cns) (var z pos)))))", "(var k cns)"}},
    {"mu-eta-l", {"(mu (eta (var i idx)) (var d dec))", "(app (var d dec) (eta-pos (var i idx)))"}},
    {"beta", {"(app (lam x (eta (typ (var c cns) (var x pos)))) (var p pos))", "(eta (typ (var c cns) (var p pos)))"}},
    {"fun-eta", {"(lam y (app (var g dec) (var y pos)))", "(var g dec)"}},
    {"eta-pos-elim", {"(eta-elim (var i idx) (var v opaque) (eta-pos (var i idx)))", "(var v opaque)"}},
    {"mu-pos-unit-l", {"(mu-pos (eta (var i idx)) (var d dec) (eta-pos (var i idx)) (var q pos))", "(var q pos)"}},
    {"mu-pos-unit-r",
     {"(mu-pos (var c cns) (lam x (eta (typ (var c cns) (var x pos)))) (var p pos) (eta-pos (typ (var c cns) (var p "
      "pos))))",
      "(var p pos)"}},
};

}  // namespace

TEST_CASE("rule names round trip") {
  CHECK(all_rules().size() == 14);
  std::set<std::string> names;
  for (RuleId r : all_rules()) {
    names.insert(std::string(rule_name(r)));
    CHECK(rule_from_name(rule_name(r)) == r);
  }
  CHECK(names.size() == 14);
  CHECK_FALSE(rule_from_name("nope").has_value());
  CHECK(strategy_from_name("lo") == Strategy::LeftmostOutermost);
  CHECK(strategy_from_name("ri") == Strategy::RightmostInnermost);
}

TEST_CASE("each rule on a representative redex") {
  for (const auto& [name, io] : kCases) {
    CAPTURE(name);
    auto r = rule_from_name(name);
    REQUIRE(r);
    auto out = apply_rule(*r, T(io.first));
    REQUIRE(out);
    CHECK(alpha_eq(*out, T(io.second)));
  }
}

TEST_CASE("mu-mu reduct") {
  auto out = apply_rule(RuleId::MuMu, T("(mu (mu (var c cns) (var d dec)) (var e dec))"));
  REQUIRE(out);
  CHECK(alpha_eq(*out, T("(mu (var c cns) (lam a (mu (app (var d dec) (var a pos)) (lam b (app (var e dec) (mu-pos "
                         "(var c cns) (var d dec) (var a pos) (var b pos)))))))")));
}

TEST_CASE("side conditions block rules") {
  // Mismatched constructors in the projection.
  CHECK_FALSE(apply_rule(RuleId::MuPosFst,
                         T("(mu-fst (var c cns) (var d dec) (mu-pos (var k cns) (var d dec) (var a pos) (var b pos)))")));
  // Unit decoration over a different constructor.
  CHECK_FALSE(apply_rule(RuleId::MuEtaR, T("(mu (var k cns) (lam z (eta (typ (var c cns) (var z pos)))))")));
  // Binder occurs in the decoration.
  CHECK_FALSE(apply_rule(RuleId::FunEta, T("(lam y (app (lam z (eta (typ (var c cns) (var y pos)))) (var y pos)))")));
  // eta-elim at a different index.
  CHECK_FALSE(apply_rule(RuleId::EtaPosElimComp, T("(eta-elim (var i idx) (var v opaque) (eta-pos (var j idx)))")));
  CHECK_FALSE(apply_rule(RuleId::TypEta, T("(var i idx)")));
}

TEST_CASE("normalize the mu-eta-r redex") {
  Term t = T("(mu (var c cns) (lam x (eta (typ (var c cns) (var x pos)))))");
  for (Strategy s : {Strategy::LeftmostOutermost, Strategy::RightmostInnermost}) {
    NormalizationResult r = normalize(t, s);
    CHECK(r.normal_form == Term::var("c", Sort::Cns));
    CHECK(r.steps == 1);
    CHECK_FALSE(r.exhausted_budget);
    REQUIRE(r.trace.size() == 1);
    CHECK(r.trace[0].rule == RuleId::MuEtaR);
    CHECK(r.trace[0].path.empty());
  }
}

TEST_CASE("strategies pick different redexes") {
  // Outer mu-eta-l redex whose decoration contains a fun-eta redex.
  Term t = T("(mu (eta (var i idx)) (lam y (app (var d dec) (var y pos))))");
  auto lo = step(t, Strategy::LeftmostOutermost);
  auto ri = step(t, Strategy::RightmostInnermost);
  REQUIRE(lo);
  REQUIRE(ri);
  CHECK(lo->rule == RuleId::MuEtaL);
  CHECK(ri->rule == RuleId::FunEta);
  CHECK(all_steps(t).size() == 2);
  CHECK(normalize(t, Strategy::LeftmostOutermost).normal_form ==
        normalize(t, Strategy::RightmostInnermost).normal_form);
}

TEST_CASE("budget") {
  Term t = T("(mu (eta (var i idx)) (lam y (app (var d dec) (var y pos))))");
  NormalizationResult r = normalize(t, Strategy::LeftmostOutermost, 1);
  CHECK(r.exhausted_budget);
  CHECK(r.steps == 1);
  NormalizationResult z = normalize(T("(var c cns)"), Strategy::LeftmostOutermost, 0);
  CHECK_FALSE(z.exhausted_budget);
}

TEST_CASE("disabling a rule") {
  Term t = T("(mu (var c cns) (lam x (eta (typ (var c cns) (var x pos)))))");
  RuleSet rs = RuleSet::all().without(RuleId::MuEtaR);
  CHECK_FALSE(rs.has(RuleId::MuEtaR));
  NormalizationResult r = normalize(t, Strategy::LeftmostOutermost, kDefaultBudget, rs);
  CHECK(r.normal_form == t);
}

TEST_CASE("critical pairs") {
  auto cps = critical_pairs();
  REQUIRE(cps.size() >= 5);
  for (const CriticalPair& cp : cps) {
    CAPTURE(cp.name);
    // Both reducts really are one step from the peak.
    bool left = false, right = false;
    for (const StepResult& s : all_steps(cp.peak)) {
      left |= s.rule == cp.left_rule && alpha_eq(s.term, cp.left_reduct);
      right |= s.rule == cp.right_rule && alpha_eq(s.term, cp.right_reduct);
    }
    CHECK(left);
    CHECK(right);
    JoinReport jr = check_joinable(cp);
    CHECK(jr.joined);
    CHECK(jr.left.size() == 2);
    CHECK(jr.right.size() == 2);
  }
  Term i = Term::var("i", Sort::Idx);
  CHECK(alpha_eq(*check_joinable(cps[0]).meet, Term::eta(i)));
  CHECK(alpha_eq(*check_joinable(cps[1]).meet, T("(mu (var c cns) (var d dec))")));
}

TEST_CASE("curated pairs fail to join without the compatibility rules") {
  auto cps = curated_critical_pairs();
  RuleSet rs = RuleSet::all().without(RuleId::MuPosUnitL).without(RuleId::MuPosUnitR).without(RuleId::MuPosAssoc);
  bool some_unjoined = false;
  for (const CriticalPair& cp : cps) some_unjoined |= !check_joinable(cp, kJoinBudget, rs).joined;
  CHECK(some_unjoined);
}

TEST_CASE("normal forms have no redexes") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Term t = random_term(static_cast<Sort>(seed % 5), 5, seed);
    NormalizationResult r = normalize(t, Strategy::RightmostInnermost, kDefaultBudget, {}, false);
    REQUIRE_FALSE(r.exhausted_budget);
    CHECK(all_steps(r.normal_form).empty());
    CHECK(r.normal_form.sort() == t.sort());
  }
}

TEST_CASE("random terms are deterministic") {
  CHECK(random_term(Sort::Cns, 6, 42) == random_term(Sort::Cns, 6, 42));
  CHECK(random_term(Sort::Pos, 6, 3).sort() == Sort::Pos);
}

TEST_CASE("fuzz agreement is independent of jobs") {
  FuzzReport a = fuzz_confluence(500, 5, 11, kDefaultBudget, 1);
  FuzzReport b = fuzz_confluence(500, 5, 11, kDefaultBudget, 3);
  CHECK(a.terms == 500);
  CHECK(a.agreed == 500);
  CHECK(a.exhausted == 0);
  CHECK(a.agreed == b.agreed);
  CHECK(a.max_steps == b.max_steps);
}

TEST_CASE("rewriting preserves the interpretation") {
  MonadCode s = MonadCode::slice(MonadCode::id());
  std::size_t steps = 0;
  for (const MonadCode& m : {MonadCode::id(), s, MonadCode::slice(s)})
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      ClosedTerm ct = random_closed_term(m, 2, 5, seed);
      CHECK(interpret_term(m, ct.env, ct.term) == ct.value);
      for (const StepResult& st : all_steps(ct.term)) {
        CAPTURE(ct.term.to_string());
        CAPTURE(rule_name(st.rule));
        CHECK(interpret_term(m, ct.env, st.term) == ct.value);
        ++steps;
      }
    }
  CHECK(steps > 0);
}
