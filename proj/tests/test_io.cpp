#include "doctest.h"

#include "opetopic/error.hpp"
#include "opetopic/io.hpp"
#include "opetopic/monad.hpp"
#include "oracles.hpp"

using namespace opetopic;
using io::json;

TEST_CASE("monoid specs from json") {
  MonoidSpec z2 = io::monoid_from_json(json::parse(io::read_file(OPETOPIC_TEST_DATA "/z2.json")));
  CHECK(z2.carrier.name == "Z2");
  CHECK(z2.product("1", "1") == "0");
  CHECK(oracle::is_monoid(z2));
  MonoidSpec back = io::monoid_from_json(io::to_json(z2), "Z2");
  CHECK(back.mul == z2.mul);
  CHECK(back.unit == z2.unit);

  MonoidSpec na = io::monoid_from_json(json::parse(io::read_file(OPETOPIC_TEST_DATA "/nonassoc.json")));
  CHECK_FALSE(oracle::is_monoid(na));

  json numeric = {{"carrier", {0, 1}}, {"unit", 0}, {"mul", {{"0", {{"0", 0}, {"1", 1}}}, {"1", {{"0", 1}, {"1", 0}}}}}};
  CHECK(io::monoid_from_json(numeric).product("1", "1") == "0");

  CHECK_THROWS_AS(io::monoid_from_json(json::parse(R"({"carrier": ["e"], "unit": "x", "mul": {"e": {"e": "e"}}})")),
                  ParseError);
  CHECK_THROWS_AS(io::monoid_from_json(json::parse(R"({"carrier": ["e"], "unit": "e"})")), ParseError);
  CHECK_THROWS_AS(io::read_file("/nonexistent/spec.json"), Error);
}

TEST_CASE("family tables from json") {
  json j = json::parse(R"j({"tt": ["a", "b"], "(pair tt tt)": ["x"]})j");
  FamilyRef f = io::table_from_json("T", j);
  CHECK(family_at(f, Value()).size() == 2);
  CHECK(family_at(f, Value::pair(Value(), Value())).size() == 1);
  MonadCode m = MonadCode::pb(MonadCode::id(), f);
  CHECK(idx_enum(m, 1).size() == 2);
  CHECK_THROWS_AS(io::table_from_json("T", json::parse(R"({"tt": "a"})")), ParseError);
}

TEST_CASE("reports serialize deterministically") {
  MonoidSpec z2 = cyclic_monoid(2);
  FibrancyReport r = fibrancy_check(monoid_families(z2, 2), 2, Bounds{2, 2, 3, 1});
  json a = io::to_json(r);
  json b = io::to_json(fibrancy_check(monoid_families(z2, 2), 2, Bounds{2, 2, 3, 2}));
  CHECK(a.dump() == b.dump());
  CHECK(a["holds"] == true);
  CHECK(a["levels"].size() == 2);
  CHECK(a["levels"][1]["level"] == 2);

  Term t = parse_term(io::read_file(OPETOPIC_TEST_DATA "/mu_eta_r.sexp"));
  NormalizationResult n = normalize(t, Strategy::LeftmostOutermost);
  json nj = io::to_json(n);
  CHECK(nj["steps"] == 1);
  CHECK(nj["normal_form"] == "(var c cns)");
  CHECK(nj["trace"].size() == 1);
}
