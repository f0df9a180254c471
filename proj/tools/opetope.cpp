#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "opetopic/algebra.hpp"
#include "opetopic/dep_monad.hpp"
#include "opetopic/error.hpp"
#include "opetopic/io.hpp"
#include "opetopic/monad.hpp"
#include "opetopic/opetope.hpp"
#include "opetopic/rewrite.hpp"
#include "opetopic/term_gen.hpp"

namespace fs = std::filesystem;
using namespace opetopic;
using io::json;

namespace {

struct Common {
  std::string json_out;
  std::uint64_t seed = 7;
  unsigned jobs = 1;
  std::size_t bound = 3;
  std::size_t max_cx = 10;
};

struct Outcome {
  json config;
  json result;
  bool holds = true;
};

Bounds bounds_of(const Common& c, int levels = 2) {
  return Bounds{c.bound, levels, c.max_cx, c.jobs};
}

std::string dir_of(const std::string& path) {
  fs::path p = fs::path(path).parent_path();
  return p.empty() ? "." : p.string();
}

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t k = 0;
  while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
  return s.substr(k);
}

// Text or @file.
std::string text_arg(const std::string& arg) {
  if (!arg.empty() && arg[0] == '(') return arg;
  return trim(io::read_file(arg));
}

void print_check(const std::string& label, const CheckReport& r) {
  std::cout << label << ": " << (r.holds ? "holds" : "FAILS") << " (" << r.checked << " checked, " << r.failures
            << " failures)\n";
  for (const Counterexample& c : r.counterexamples) {
    std::cout << "  counterexample index=" << c.index.to_string() << "\n    cns=" << c.cns.to_string()
              << "\n    dec=" << c.dec.to_string() << "\n    fiber size " << c.fiber_size;
    if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
    std::cout << "\n";
  }
}

void print_fibrancy(const FibrancyReport& r) {
  for (std::size_t k = 0; k < r.levels.size(); ++k)
    print_check("level " + std::to_string(r.first_level + static_cast<int>(k)), r.levels[k]);
  std::cout << "fibrancy " << (r.holds ? "holds" : "fails") << "\n";
}

// --------------------------------------------------------------------------

struct NormalizeArgs {
  std::string term, strategy = "lo";
  std::size_t budget = kDefaultBudget;
  bool trace = false;
};

Outcome run_normalize(const NormalizeArgs& a) {
  auto strategy = strategy_from_name(a.strategy);
  if (!strategy) throw ParseError("unknown strategy '" + a.strategy + "' (lo or ri)", 0);
  Term t = parse_term(text_arg(a.term));
  NormalizationResult r = normalize(t, *strategy, a.budget);
  Outcome o;
  o.config = {{"term", t.to_string()}, {"strategy", a.strategy}, {"budget", a.budget}};
  o.result = io::to_json(r);
  o.holds = !r.exhausted_budget;
  std::cout << r.normal_form.to_string() << "\n"
            << r.steps << (r.steps == 1 ? " step" : " steps") << (r.exhausted_budget ? " (budget exhausted)" : "")
            << "\n";
  if (a.trace)
    for (const TraceEntry& e : r.trace) std::cout << "  " << rule_name(e.rule) << " at " << path_to_string(e.path) << "\n";
  return o;
}

struct ConfluenceArgs {
  std::size_t fuzz = 10000, budget = kDefaultBudget;
  int depth = 6;
};

Outcome run_confluence(const ConfluenceArgs& a, const Common& c) {
  Outcome o;
  o.config = {{"fuzz", a.fuzz}, {"depth", a.depth}, {"budget", a.budget}, {"seed", c.seed}, {"jobs", c.jobs}};
  json pairs = json::array();
  std::size_t joined = 0;
  std::vector<CriticalPair> cps = critical_pairs();
  for (const CriticalPair& cp : cps) {
    JoinReport jr = check_joinable(cp);
    joined += jr.joined;
    pairs.push_back(io::to_json(jr));
    std::cout << cp.name << " (" << rule_name(cp.left_rule) << " / " << rule_name(cp.right_rule)
              << "): " << (jr.joined ? "joined" : "NOT JOINED") << "\n";
    if (jr.meet) std::cout << "  meet " << jr.meet->to_string() << "\n";
  }
  std::cout << "critical pairs joined " << joined << "/" << cps.size() << "\n";
  FuzzReport fr = fuzz_confluence(a.fuzz, a.depth, c.seed, a.budget, c.jobs);
  std::cout << "fuzz agreement " << fr.agreed << "/" << fr.terms << ", max steps " << fr.max_steps
            << ", budget exhausted " << fr.exhausted << "\n";
  for (const FuzzCase& d : fr.disagreements)
    std::cout << "  seed " << d.seed << ": " << d.term.to_string() << "\n    lo " << d.lo.normal_form.to_string()
              << "\n    ri " << d.ri.normal_form.to_string() << "\n";
  o.result = {{"critical_pairs", pairs}, {"fuzz", io::to_json(fr)}};
  o.holds = joined == cps.size() && fr.agreed == fr.terms && fr.exhausted == 0;
  return o;
}

struct EnumerateArgs {
  std::string code = "(id)", role = "cns", index;
  int dim = 1;
};

Outcome run_enumerate(const EnumerateArgs& a, const Common& c) {
  Outcome o;
  if (a.role == "opetope") {
    if (a.dim < 0) throw ParseError("--dim must be non-negative", 0);
    o.config = {{"role", a.role}, {"dim", a.dim}, {"bound", c.bound}};
    OpetopeListing l = enumerate_opetopes(a.dim, c.bound);
    std::cout << "monad " << l.monad.to_string() << "\n";
    for (const OpetopeGroup& g : l.groups) {
      std::cout << "index " << g.index.to_string() << ": " << g.shapes.size() << "\n";
      for (const Value& s : g.shapes) std::cout << "  " << s.to_string() << "\n";
    }
    std::cout << "total " << l.total() << "\n";
    o.result = io::to_json(l);
    return o;
  }
  std::string code_text = text_arg(a.code);
  MonadCode m = parse_code(code_text, io::file_loader(fs::exists(a.code) ? dir_of(a.code) : "."));
  o.config = {{"code", m.to_string()}, {"role", a.role}, {"bound", c.bound}};
  json items = json::array();
  auto list = [&](const std::vector<Value>& vs) {
    for (const Value& v : vs) {
      std::cout << v.to_string() << "\n";
      items.push_back(v.to_string());
    }
  };
  if (a.role == "idx") {
    list(idx_enum(m, c.bound));
  } else if (a.role == "cns") {
    std::vector<Value> idxs;
    if (a.index.empty()) {
      idxs = idx_enum(m, c.bound);
    } else {
      idxs.push_back(parse_value(a.index));
      o.config["index"] = idxs.back().to_string();
    }
    for (const Value& i : idxs) {
      std::vector<Value> cs = cns_enum(m, i, c.bound);
      std::cout << "index " << i.to_string() << ": " << cs.size() << "\n";
      for (const Value& v : cs) std::cout << "  " << v.to_string() << "\n";
      json group = json::array();
      for (const Value& v : cs) group.push_back(v.to_string());
      items.push_back({{"index", i.to_string()}, {"cns", group}});
    }
  } else {
    throw ParseError("--role must be idx, cns or opetope", 0);
  }
  o.result = {{"items", items}};
  return o;
}

Outcome run_check_mult(const std::string& file, const Common& c) {
  json in = json::parse(io::read_file(file));
  TableLoader loader = io::file_loader(dir_of(file));
  MonadCode m = parse_code(in.at("m").get<std::string>(), loader);
  FamilyRef x0 = parse_family(in.at("x0").get<std::string>(), loader);
  FamilyRef x1 = parse_family(in.at("x1").get<std::string>(), loader);
  Outcome o;
  o.config = {{"m", m.to_string()}, {"x0", x0.to_string()}, {"x1", x1.to_string()}, {"bound", c.bound}};
  MultReport r = ismult_check(m, x0, x1, bounds_of(c));
  print_check("ismult", r);
  o.result = io::to_json(r);
  o.holds = r.holds;
  return o;
}

Extension load_extension(const std::string& arg) {
  return parse_extension(text_arg(arg), io::file_loader(fs::exists(arg) ? dir_of(arg) : "."));
}

Outcome run_check_algebraic(const std::string& file, const Common& c) {
  Extension ext = load_extension(file);
  Outcome o;
  o.config = {{"m", ext.m.to_string()}, {"md", ext.md.to_string()}, {"bound", c.bound}};
  AlgReport r = isalgebraic_check(ext, bounds_of(c));
  print_check("isalgebraic", r);
  o.result = io::to_json(r);
  o.holds = r.holds;
  return o;
}

struct FibrancyArgs {
  std::string ext, stack, monoid;
  int levels = 2;
  bool pre_cat = false;
};

Outcome run_fibrancy(const FibrancyArgs& a, const Common& c) {
  int given = !a.ext.empty() + !a.stack.empty() + !a.monoid.empty();
  if (given != 1) throw ParseError("give exactly one of --ext, --stack, --monoid", 0);
  if (a.levels < 1) throw ParseError("--levels must be at least 1", 0);
  Outcome o;
  FamilyStack s{MonadCode::id(), {}};
  if (!a.ext.empty()) {
    Extension ext = load_extension(a.ext);
    s = over_optype_stack(ext, a.levels);
    o.config = {{"ext", {ext.m.to_string(), ext.md.to_string()}}};
  } else if (!a.stack.empty()) {
    s = io::stack_from_json(json::parse(io::read_file(a.stack)), io::file_loader(dir_of(a.stack)));
    o.config = {{"stack", a.stack}};
  } else {
    MonoidSpec spec = io::monoid_from_json(json::parse(io::read_file(a.monoid)));
    s = monoid_families(spec, a.levels);
    o.config = {{"monoid", io::to_json(spec)}};
  }
  o.config["m0"] = s.m0.to_string();
  o.config["levels"] = a.levels;
  o.config["bound"] = c.bound;
  o.config["pre_cat"] = a.pre_cat;
  FibrancyReport r = fibrancy_check(s, a.levels, bounds_of(c, a.levels), a.pre_cat);
  print_fibrancy(r);
  o.result = io::to_json(r);
  o.holds = r.holds;
  return o;
}

FiniteSetSpec carrier_of(const std::string& arg) {
  if (!arg.empty() && arg[0] == '(') return parse_set(arg);
  std::size_t n = 0;
  try {
    n = std::stoul(arg);
  } catch (const std::exception&) {
    throw ParseError("--carrier expects (set NAME e...) or a size", 0);
  }
  std::vector<std::string> el;
  for (std::size_t k = 0; k < n; ++k) el.push_back("a" + std::to_string(k));
  return make_set("A", el);
}

Outcome run_groupoid(const std::string& carrier, int levels, const Common& c) {
  FiniteSetSpec a = carrier_of(carrier);
  Outcome o;
  o.config = {{"carrier", a.to_string()}, {"levels", levels}, {"bound", c.bound}};
  FibrancyReport r = groupoid_check(a, levels, bounds_of(c, levels));
  print_fibrancy(r);
  o.result = io::to_json(r);
  o.holds = r.holds;
  return o;
}

Outcome run_monoid(const std::string& file, int levels, const Common& c) {
  MonoidSpec spec = io::monoid_from_json(json::parse(io::read_file(file)));
  Outcome o;
  o.config = {{"spec", io::to_json(spec)}, {"levels", levels}, {"bound", c.bound}};
  FamilyStack s = monoid_families(spec, levels);
  FibrancyReport r = fibrancy_check(s, levels, bounds_of(c, levels));
  print_fibrancy(r);
  o.result = io::to_json(r);
  o.holds = r.holds;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Opetopic type theory: rewriting, monads and algebraic checks"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--json", common.json_out, "Write the report as JSON");
    sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
    sub->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
    sub->add_option("--bound", common.bound, "Tree and constructor size bound")->capture_default_str();
    sub->add_option("--max-counterexamples", common.max_cx)->capture_default_str();
  };

  NormalizeArgs na;
  auto* normalize_cmd = app.add_subcommand("normalize", "Normalize a term");
  normalize_cmd->add_option("--term", na.term, "Term text or .sexp file")->required();
  normalize_cmd->add_option("--strategy", na.strategy)->check(CLI::IsMember({"lo", "ri"}))->capture_default_str();
  normalize_cmd->add_option("--budget", na.budget)->capture_default_str();
  normalize_cmd->add_flag("--trace", na.trace, "Print the rewrite trace");
  add_common(normalize_cmd);

  ConfluenceArgs ca;
  auto* confluence_cmd = app.add_subcommand("confluence", "Join critical pairs and fuzz both strategies");
  confluence_cmd->add_option("--fuzz", ca.fuzz)->capture_default_str();
  confluence_cmd->add_option("--depth", ca.depth)->check(CLI::Range(0, 32))->capture_default_str();
  confluence_cmd->add_option("--budget", ca.budget)->capture_default_str();
  add_common(confluence_cmd);

  EnumerateArgs ea;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "List indices, constructors or opetopes");
  enumerate_cmd->add_option("code", ea.code, "Monad code text or .sexp file");
  enumerate_cmd->add_option("--role", ea.role)->check(CLI::IsMember({"idx", "cns", "opetope"}))->capture_default_str();
  enumerate_cmd->add_option("--index", ea.index, "Restrict cns to one index");
  enumerate_cmd->add_option("--dim", ea.dim)->capture_default_str();
  add_common(enumerate_cmd);

  std::string mult_file;
  auto* mult_cmd = app.add_subcommand("check-mult", "Check that X1 is a multiplicative relation on X0");
  mult_cmd->add_option("file", mult_file, "JSON with m, x0, x1")->required()->check(CLI::ExistingFile);
  add_common(mult_cmd);

  std::string alg_file;
  auto* alg_cmd = app.add_subcommand("check-algebraic", "Check that an extension is algebraic");
  alg_cmd->add_option("file", alg_file, "Extension text or .sexp file")->required();
  add_common(alg_cmd);

  FibrancyArgs fa;
  auto* fib_cmd = app.add_subcommand("fibrancy", "Check fibrancy of an opetopic type up to a level");
  fib_cmd->add_option("--ext", fa.ext, "Extension whose over-optype stack is checked");
  fib_cmd->add_option("--stack", fa.stack, "JSON family stack")->check(CLI::ExistingFile);
  fib_cmd->add_option("--monoid", fa.monoid, "JSON monoid spec")->check(CLI::ExistingFile);
  fib_cmd->add_option("--levels", fa.levels)->capture_default_str();
  fib_cmd->add_flag("--pre-cat", fa.pre_cat, "Start at level 2");
  add_common(fib_cmd);

  std::string carrier;
  int groupoid_levels = 2;
  auto* groupoid_cmd = app.add_subcommand("groupoid", "Check the discrete groupoid on a finite set");
  groupoid_cmd->add_option("--carrier", carrier, "(set NAME e...) or a size")->required();
  groupoid_cmd->add_option("--levels", groupoid_levels)->check(CLI::Range(1, 8))->capture_default_str();
  add_common(groupoid_cmd);

  std::string spec_file;
  int monoid_levels = 2;
  auto* monoid_cmd = app.add_subcommand("monoid", "Check the opetopic type of a monoid table");
  monoid_cmd->add_option("--spec", spec_file, "JSON monoid spec")->required()->check(CLI::ExistingFile);
  monoid_cmd->add_option("--levels", monoid_levels)->check(CLI::Range(1, 8))->capture_default_str();
  add_common(monoid_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    if (sub == normalize_cmd) o = run_normalize(na);
    else if (sub == confluence_cmd) o = run_confluence(ca, common);
    else if (sub == enumerate_cmd) o = run_enumerate(ea, common);
    else if (sub == mult_cmd) o = run_check_mult(mult_file, common);
    else if (sub == alg_cmd) o = run_check_algebraic(alg_file, common);
    else if (sub == fib_cmd) o = run_fibrancy(fa, common);
    else if (sub == groupoid_cmd) o = run_groupoid(carrier, groupoid_levels, common);
    else o = run_monoid(spec_file, monoid_levels, common);
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  o.config["command"] = sub->get_name();
  o.config["seed"] = common.seed;
  o.config["jobs"] = common.jobs;
  std::cout << "config " << o.config.dump() << "\n";
  std::cout << "result " << (o.holds ? "pass" : "fail") << ", " << std::fixed << std::setprecision(3) << secs
            << " s\n";
  if (!common.json_out.empty()) {
    json report = {{"command", o.config}, {"result", o.result}, {"holds", o.holds}, {"exit", o.holds ? 0 : 1}};
    try {
      io::write_file(common.json_out, report.dump(2) + "\n");
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return o.holds ? 0 : 1;
}
