#include "opetopic/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "opetopic/error.hpp"

namespace opetopic::io {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

namespace {

std::string element_name(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ParseError("expected an element name, got " + j.dump(), 0);
}

json value(const Value& v) { return v.to_string(); }

}  // namespace

FamilyRef table_from_json(const std::string& name, const json& j) {
  if (!j.is_object()) throw ParseError("family table " + name + " must be a JSON object", 0);
  FamilyTable table;
  for (const auto& [key, elems] : j.items()) {
    if (!elems.is_array()) throw ParseError("fiber of " + key + " in " + name + " must be a list", 0);
    std::vector<Value> fiber;
    for (const json& e : elems) fiber.push_back(parse_value(element_name(e)));
    table[parse_value(key)] = std::move(fiber);
  }
  return FamilyRef::table(name, std::move(table));
}

TableLoader file_loader(const std::string& dir) {
  return [dir](const std::string& file) {
    std::filesystem::path p = std::filesystem::path(dir) / file;
    json j;
    try {
      j = json::parse(read_file(p.string()));
    } catch (const json::exception& e) {
      throw ParseError(p.string() + ": " + e.what(), 0);
    }
    return table_from_json(p.stem().string(), j);
  };
}

MonoidSpec monoid_from_json(const json& j, const std::string& name) {
  try {
    std::vector<std::string> el;
    for (const json& e : j.at("carrier")) el.push_back(element_name(e));
    MonoidSpec spec{make_set(j.value("name", name), el), element_name(j.at("unit")), {}};
    const json& mul = j.at("mul");
    for (const std::string& a : el) {
      spec.mul.emplace_back();
      for (const std::string& b : el) spec.mul.back().push_back(element_name(mul.at(a).at(b)));
    }
    validate(spec);
    return spec;
  } catch (const json::exception& e) {
    throw ParseError(std::string("monoid spec: ") + e.what(), 0);
  } catch (const EvalError& e) {
    throw ParseError(std::string("monoid spec: ") + e.what(), 0);
  }
}

json to_json(const MonoidSpec& spec) {
  json mul = json::object();
  const auto& el = spec.carrier.elements;
  for (std::size_t a = 0; a < el.size(); ++a)
    for (std::size_t b = 0; b < el.size(); ++b) mul[el[a]][el[b]] = spec.mul[a][b];
  return {{"name", spec.carrier.name}, {"carrier", el}, {"unit", spec.unit}, {"mul", mul}};
}

FamilyStack stack_from_json(const json& j, const TableLoader& loader) {
  try {
    FamilyStack s{parse_code(j.at("m0").get<std::string>(), loader), {}};
    for (const json& f : j.at("families")) s.families.push_back(parse_family(f.get<std::string>(), loader));
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("family stack: ") + e.what(), 0);
  }
}

json to_json(const CheckReport& r) {
  json cx = json::array();
  for (const Counterexample& c : r.counterexamples) {
    json o = {{"index", value(c.index)}, {"cns", value(c.cns)}, {"dec", value(c.dec)}, {"fiber_size", c.fiber_size}};
    if (!c.detail.empty()) o["detail"] = c.detail;
    cx.push_back(o);
  }
  return {{"holds", r.holds}, {"checked", r.checked}, {"failures", r.failures}, {"counterexamples", cx}};
}

json to_json(const FibrancyReport& r) {
  json levels = json::array();
  for (std::size_t k = 0; k < r.levels.size(); ++k) {
    json l = to_json(r.levels[k]);
    l["level"] = r.first_level + static_cast<int>(k);
    levels.push_back(l);
  }
  return {{"holds", r.holds}, {"first_level", r.first_level}, {"levels", levels}};
}

json to_json(const NormalizationResult& r) {
  json trace = json::array();
  for (const TraceEntry& e : r.trace) trace.push_back({{"rule", rule_name(e.rule)}, {"path", path_to_string(e.path)}});
  return {{"normal_form", r.normal_form.to_string()},
          {"steps", r.steps},
          {"exhausted_budget", r.exhausted_budget},
          {"trace", trace}};
}

json to_json(const JoinReport& r) {
  json o = {{"name", r.pair.name},
            {"peak", r.pair.peak.to_string()},
            {"left_rule", rule_name(r.pair.left_rule)},
            {"right_rule", rule_name(r.pair.right_rule)},
            {"left_reduct", r.pair.left_reduct.to_string()},
            {"right_reduct", r.pair.right_reduct.to_string()},
            {"joined", r.joined}};
  o["meet"] = r.meet ? json(r.meet->to_string()) : json(nullptr);
  json branches = json::array();
  for (const auto* side : {&r.left, &r.right})
    for (const BranchResult& b : *side)
      branches.push_back({{"strategy", strategy_name(b.strategy)},
                          {"normal_form", b.result.normal_form.to_string()},
                          {"steps", b.result.steps},
                          {"exhausted_budget", b.result.exhausted_budget}});
  o["branches"] = branches;
  return o;
}

json to_json(const FuzzReport& r) {
  json d = json::array();
  for (const FuzzCase& c : r.disagreements)
    d.push_back({{"seed", c.seed},
                 {"term", c.term.to_string()},
                 {"lo", c.lo.normal_form.to_string()},
                 {"ri", c.ri.normal_form.to_string()}});
  return {{"terms", r.terms},
          {"agreed", r.agreed},
          {"max_steps", r.max_steps},
          {"exhausted", r.exhausted},
          {"disagreements", d}};
}

json to_json(const LiftResult& r) {
  return {{"omega", value(r.omega)}, {"sigma_down", value(r.sigma_down)}, {"zeta", r.zeta}};
}

json to_json(const OpetopeListing& l) {
  json groups = json::array();
  for (const OpetopeGroup& g : l.groups) {
    json shapes = json::array();
    for (const Value& s : g.shapes) shapes.push_back(value(s));
    groups.push_back({{"index", value(g.index)}, {"count", g.shapes.size()}, {"shapes", shapes}});
  }
  return {{"dim", l.dim}, {"bound", l.bound}, {"monad", l.monad.to_string()}, {"total", l.total()}, {"groups", groups}};
}

}  // namespace opetopic::io
