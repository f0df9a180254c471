#include "doctest.h"

#include <algorithm>

#include "opetopic/error.hpp"
#include "opetopic/monad.hpp"
#include "opetopic/opetope.hpp"
#include "oracles.hpp"

using namespace opetopic;

namespace {

MonadCode slice_id() { return MonadCode::slice(MonadCode::id()); }

FamilyRef two_over(const Value& i, const char* a, const char* b) {
  FamilyTable t;
  t[i] = {Value::atom(a), Value::atom(b)};
  return FamilyRef::table("T", t);
}

std::vector<MonadCode> law_codes() {
  MonadCode s = slice_id();
  return {MonadCode::id(), MonadCode::pb(MonadCode::id(), two_over(Value(), "a", "b")), s, MonadCode::slice(s),
          MonadCode::pb(s, two_over(Value::pair(Value(), Value()), "x", "y"))};
}

}  // namespace

TEST_CASE("identity monad") {
  MonadCode id = MonadCode::id();
  CHECK(idx_enum(id, 3) == std::vector<Value>{Value()});
  CHECK(cns_enum(id, Value(), 3) == std::vector<Value>{Value()});
  CHECK(pos_enum(id, Value()).size() == 1);
  CHECK(eta(id, Value()) == Value());
}

TEST_CASE("slice of the identity: chains") {
  MonadCode s = slice_id();
  Value i = Value::pair(Value(), Value());
  CHECK(idx_enum(s, 3) == std::vector<Value>{i});
  std::vector<Value> cs = cns_enum(s, i, 3);
  REQUIRE(cs.size() == 4);
  for (std::size_t n = 0; n < cs.size(); ++n) {
    CHECK(tree_nodes(cs[n]) == n);
    CHECK(pos_enum(s, cs[n]).size() == n);
  }
  CHECK(is_corolla(eta(s, i)));
  CHECK(pos_enum(s, eta(s, i)) == std::vector<Value>{eta_pos(s, i)});
}

TEST_CASE("pullback decorates base constructors") {
  MonadCode s = slice_id();
  Value i = Value::pair(Value(), Value());
  MonadCode pb = MonadCode::pb(s, two_over(i, "x", "y"));
  std::vector<Value> idx = idx_enum(pb, 3);
  CHECK(idx.size() == 2);
  // A chain of n nodes has 2^n decorations.
  std::vector<Value> cs = cns_enum(pb, idx[0], 3);
  CHECK(cs.size() == 1 + 2 + 4 + 8);
  for (const Value& c : cs) CHECK(cns_size(pb, c) == cns_size(s, c.fst()));
}

TEST_CASE("errors on values in the wrong role") {
  MonadCode s = slice_id();
  CHECK_THROWS_AS(pos_enum(s, Value::atom("a")), EvalError);
  CHECK_THROWS_AS(typ(s, eta(s, Value::pair(Value(), Value())), Value::atom("nope")), EvalError);
  FamilyTable t;
  FamilyRef empty = FamilyRef::table("E", t);
  CHECK_THROWS_AS(family_at(empty, Value()), EvalError);
}

TEST_CASE("monad laws at bound 3") {
  for (const MonadCode& m : law_codes()) {
    CAPTURE(m.to_string());
    oracle::LawReport r = oracle::monad_laws(m, 3);
    for (const auto& [law, t] : r) {
      CAPTURE(law);
      CAPTURE(t.first_failure);
      CHECK(t.failures == 0);
    }
    CHECK(r.count("mu-mu") == 1);
    CHECK(oracle::total_checked(r) > 0);
  }
}

TEST_CASE("cartesianness at bound 3") {
  for (const MonadCode& m : law_codes()) {
    CAPTURE(m.to_string());
    oracle::LawReport r = oracle::cartesian_laws(m, 3);
    CHECK(oracle::total_failures(r) == 0);
  }
}

TEST_CASE("slice constructors agree with filtered trees") {
  // cns_enum(Slice M, (i, d)) against grouping all trees by their image.
  for (const MonadCode& base : {slice_id(), MonadCode::pb(slice_id(), two_over(Value::pair(Value(), Value()), "x", "y"))}) {
    MonadCode s = MonadCode::slice(base);
    for (const Value& i : idx_enum(base, 3)) {
      std::vector<Value> all = trees_upto(base, i, 3, 3);
      for (const Value& si : idx_enum(s, 3)) {
        if (si.fst() != i) continue;
        std::vector<Value> expect;
        for (const Value& t : all)
          if (tree_image(base, t) == si.snd()) expect.push_back(t);
        std::vector<Value> got = cns_enum(s, si, 3);
        std::sort(expect.begin(), expect.end());
        std::sort(got.begin(), got.end());
        CHECK(got == expect);
        CHECK(trees_with_image(base, i, si.snd(), 3, 3).size() == expect.size());
      }
    }
  }
}

TEST_CASE("grafting composes images") {
  MonadCode s = slice_id();
  Value i = Value::pair(Value(), Value());
  MonadCode ss = MonadCode::slice(s);
  for (const Value& c : cns_enum(s, i, 2)) {
    Value sigma = eta(ss, Value::pair(i, c));
    for (const Value& phi : oracle::bounded_decorations(s, c, 2)) {
      Value psi = make_dec(pos_enum(s, c), [&](const Value& p) { return eta(ss, Value::pair(typ(s, c, p), phi.at(p))); });
      Value g = graft(s, sigma, phi, psi);
      CHECK(tree_image(s, g) == mu(s, c, phi));
      CHECK(tree_index(s, g) == Value::pair(i, mu(s, c, phi)));
    }
  }
}

TEST_CASE("planar tree oracle") {
  // Reference counts from an explicit generator (arity at most 4).
  const std::size_t expect[5][8] = {{0, 1, 0, 0, 0, 0, 0, 0},
                                    {1, 1, 1, 1, 1, 0, 0, 0},
                                    {1, 3, 6, 10, 10, 9, 7, 4},
                                    {2, 10, 30, 60, 95, 126, 140, 120},
                                    {5, 35, 130, 340, 700, 1190, 1680, 2040}};
  for (std::size_t n = 0; n < 5; ++n)
    for (std::size_t l = 0; l < 8; ++l) CHECK(oracle::planar_trees(n, l, 4) == expect[n][l]);
}

TEST_CASE("opetopes in low dimension") {
  OpetopeListing d0 = enumerate_opetopes(0, 3);
  CHECK(d0.total() == 1);
  for (std::size_t n = 0; n <= 4; ++n) CHECK(enumerate_opetopes(1, n).total() == n + 1);
  for (std::size_t bound = 1; bound <= 3; ++bound) {
    OpetopeListing d2 = enumerate_opetopes(2, bound);
    std::size_t expect = 0;
    for (std::size_t n = 0; n <= bound; ++n)
      for (std::size_t l = 0; l <= bound; ++l) expect += oracle::planar_trees(n, l, bound);
    CHECK(d2.total() == expect);
    for (const OpetopeGroup& g : d2.groups) {
      std::size_t leaves = tree_nodes(g.index.snd());
      std::size_t want = 0;
      for (std::size_t n = 0; n <= bound; ++n) want += oracle::planar_trees(n, leaves, bound);
      CHECK(g.shapes.size() == want);
    }
  }
}
