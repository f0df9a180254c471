#pragma once

#include <bitset>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opetopic/term.hpp"

namespace opetopic {

// The first eleven rules are the monad-law reductions proper.  The last
// three orient the compatibility laws between position introduction and
// multiplication; without them some overlaps of mu-eta-l / mu-eta-r with
// mu-mu do not join.
enum class RuleId {
  TypEta,
  TypMu,
  MuPosFst,
  MuPosSnd,
  MuPosEtaLaw,
  MuEtaR,
  MuEtaL,
  MuMu,
  Beta,
  FunEta,
  EtaPosElimComp,
  MuPosUnitL,
  MuPosUnitR,
  MuPosAssoc,
};

inline constexpr std::size_t kRuleCount = 14;

std::string_view rule_name(RuleId r);
std::optional<RuleId> rule_from_name(std::string_view name);
const std::vector<RuleId>& all_rules();

// Enabled rules; all on by default.
class RuleSet {
 public:
  RuleSet() { bits_.set(); }
  static RuleSet all() { return RuleSet(); }
  RuleSet without(RuleId r) const {
    RuleSet s = *this;
    s.bits_.reset(static_cast<std::size_t>(r));
    return s;
  }
  bool has(RuleId r) const { return bits_.test(static_cast<std::size_t>(r)); }

 private:
  std::bitset<kRuleCount> bits_;
};

enum class Strategy { LeftmostOutermost, RightmostInnermost };

std::string_view strategy_name(Strategy s);
// Accepts "lo", "ri" and the long names.
std::optional<Strategy> strategy_from_name(std::string_view s);

// Child indices from the root.
using Path = std::vector<std::size_t>;
std::string path_to_string(const Path& p);

// Contracts t at its root using rule r, if t is an r-redex.
std::optional<Term> apply_rule(RuleId r, const Term& t);
// First enabled rule (in RuleId order) whose redex t is.
std::optional<std::pair<Term, RuleId>> contract(const Term& t, const RuleSet& rules = {});

struct StepResult {
  Term term;
  RuleId rule;
  Path path;
};

std::optional<StepResult> step(const Term& t, Strategy strategy, const RuleSet& rules = {});

// Every contraction of t: each enabled rule at each redex position.
std::vector<StepResult> all_steps(const Term& t, const RuleSet& rules = {});

struct TraceEntry {
  RuleId rule;
  Path path;
};

struct NormalizationResult {
  Term normal_form;
  std::size_t steps = 0;
  std::vector<TraceEntry> trace;
  bool exhausted_budget = false;
};

inline constexpr std::size_t kDefaultBudget = 100000;
inline constexpr std::size_t kJoinBudget = 50;

NormalizationResult normalize(const Term& t, Strategy strategy, std::size_t budget = kDefaultBudget,
                              const RuleSet& rules = {}, bool keep_trace = true);

// Left-hand side of a rule as a term whose free variables are the pattern
// variables.  Side conditions (binder freshness, repeated variables) are
// those checked by apply_rule.
Term rule_lhs(RuleId r);

struct CriticalPair {
  std::string name;
  Term peak;
  Term left_reduct;
  Term right_reduct;
  RuleId left_rule;
  RuleId right_rule;
};

struct BranchResult {
  Strategy strategy;
  NormalizationResult result;
};

struct JoinReport {
  CriticalPair pair;
  bool joined = false;
  std::optional<Term> meet;
  // Left reduct under both strategies, then right reduct under both.
  std::vector<BranchResult> left;
  std::vector<BranchResult> right;
};

// CP1..CP5 followed by the root overlaps found by unifying left-hand sides.
std::vector<CriticalPair> critical_pairs(const RuleSet& rules = {});
std::vector<CriticalPair> curated_critical_pairs();
std::vector<CriticalPair> root_overlaps(const RuleSet& rules = {});

JoinReport check_joinable(const CriticalPair& cp, std::size_t budget = kJoinBudget,
                          const RuleSet& rules = {});

}  // namespace opetopic
