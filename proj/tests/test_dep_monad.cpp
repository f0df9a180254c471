#include "doctest.h"

#include <algorithm>

#include "opetopic/dep_monad.hpp"
#include "opetopic/error.hpp"
#include "opetopic/monad.hpp"
#include "oracles.hpp"

using namespace opetopic;

namespace {

Extension base_ext(std::size_t n) {
  std::vector<std::string> el;
  for (std::size_t k = 0; k < n; ++k) el.push_back("a" + std::to_string(k));
  return Extension{MonadCode::id(), DepMonadCode::id(make_set("A", el))};
}

bool contains(const std::vector<Value>& vs, const Value& v) { return std::find(vs.begin(), vs.end(), v) != vs.end(); }

struct OverTally {
  std::size_t checked = 0;
  std::size_t failures = 0;
  void operator()(bool ok) {
    ++checked;
    failures += !ok;
  }
};

// Dependent values lie over their base values, and the dependent unit
// laws hold, on every input within bound.
OverTally overness(const Extension& e, std::size_t bound) {
  OverTally t;
  const MonadCode& m = e.m;
  const DepMonadCode& md = e.md;
  for (const Value& i : idx_enum(m, bound))
    for (const Value& jd : didx_enum(md, i)) {
      Value ed = deta(md, i, jd);
      t(lies_over(md, ed, eta(m, i)));
      t(contains(dcns_enum(md, i, jd, eta(m, i)), ed));
      t(dtyp(md, i, jd, eta(m, i), ed, eta_pos(m, i)) == jd);
      for (const Value& c : cns_enum(m, i, bound)) {
        std::vector<Value> ps = pos_enum(m, c);
        for (const Value& cd : dcns_enum(md, i, jd, c)) {
          t(lies_over(md, cd, c));
          for (const Value& p : ps) t(contains(didx_enum(md, typ(m, c, p)), dtyp(md, i, jd, c, cd, p)));
          // Right unit.
          Value unit = make_dec(ps, [&](const Value& p) { return eta(m, typ(m, c, p)); });
          Value dunit = make_dec(ps, [&](const Value& p) { return deta(md, typ(m, c, p), dtyp(md, i, jd, c, cd, p)); });
          t(dmu(md, i, jd, c, cd, unit, dunit) == cd);
          // Over-ness of dmu for every dependent decoration.
          for (const Value& delta : oracle::bounded_decorations(m, c, bound)) {
            Value composite = mu(m, c, delta);
            std::vector<Value> dds = all_decorations(ps, [&](const Value& p) {
              return dcns_enum(md, typ(m, c, p), dtyp(md, i, jd, c, cd, p), delta.at(p));
            });
            for (const Value& dd : dds) {
              Value r = dmu(md, i, jd, c, cd, delta, dd);
              t(lies_over(md, r, composite));
              t(contains(dcns_enum(md, i, jd, composite), r));
            }
          }
        }
      }
    }
  return t;
}

}  // namespace

TEST_CASE("Id-down over a finite set") {
  Extension e = base_ext(3);
  CHECK(didx_enum(e.md, Value()).size() == 3);
  Value a = Value::atom("a1");
  CHECK(dcns_enum(e.md, Value(), a, Value()) == std::vector<Value>{Value()});
  CHECK(deta(e.md, Value(), a) == Value());
  CHECK(dtyp(e.md, Value(), a, Value(), Value(), Value()) == a);
}

TEST_CASE("equality family is proof irrelevant") {
  FiniteSetSpec a = make_set("A", {"x", "y", "z"});
  FamilyRef eq = FamilyRef::eq(a);
  for (const Value& u : a.values())
    for (const Value& v : a.values()) {
      std::vector<Value> f = family_at(eq, Value::pair(u, v));
      CHECK(f.size() == (u == v ? 1u : 0u));
      if (u == v) CHECK(f[0] == Value::refl());
    }
}

TEST_CASE("parsed extensions must lie over their base") {
  CHECK_NOTHROW(parse_extension("(ext (id) (id-dep (set A a b)))"));
  CHECK_THROWS_AS(parse_extension("(ext (slice (id)) (id-dep (set A a b)))"), ParseError);
  Extension e = base_ext(2);
  Extension e1 = next_extension(e);
  CHECK(base_of(e1.md) == e1.m);
  CHECK(tower(e, 1).m == e1.m);
  CHECK(tower(e, 0).m == e.m);
}

TEST_CASE("arrows of the tower are identity types") {
  for (std::size_t n = 1; n <= 3; ++n) {
    Extension e1 = next_extension(base_ext(n));
    std::size_t seen = 0;
    for (const Value& i : idx_enum(e1.m, 1)) {
      // i = ((tt, target), (tt, {tt: source}))
      const Value& target = i.fst().snd();
      const Value& source = i.snd().snd().at(Value());
      CHECK(didx_enum(e1.md, i).size() == (target == source ? 1u : 0u));
      CHECK(family_at(over_optype_family(base_ext(n), 1), i).size() == (target == source ? 1u : 0u));
      ++seen;
    }
    CHECK(seen == n * n);
  }
}

TEST_CASE("dependent values lie over base values") {
  Extension e = base_ext(2);
  OverTally t0 = overness(e, 2);
  CHECK(t0.failures == 0);
  Extension e1 = next_extension(e);
  OverTally t1 = overness(e1, 2);
  CHECK(t1.checked > 50);
  CHECK(t1.failures == 0);
  OverTally t2 = overness(next_extension(e1), 1);
  CHECK(t2.failures == 0);
}

TEST_CASE("lies_over rejects mismatched shapes") {
  Extension e1 = next_extension(base_ext(2));
  Value i = idx_enum(e1.m, 1)[0];
  Value jd = didx_enum(e1.md, i)[0];
  std::vector<Value> cs = cns_enum(e1.m, i, 1);
  REQUIRE(cs.size() == 2);
  Value leaf_down = dcns_enum(e1.md, i, jd, cs[0])[0];
  CHECK(lies_over(e1.md, leaf_down, cs[0]));
  CHECK_FALSE(lies_over(e1.md, leaf_down, cs[1]));
}
