#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "opetopic/rewrite.hpp"
#include "opetopic/term.hpp"

namespace opetopic {

// Deterministic random term of the given sort and depth (depth 1 = a
// variable, or eta of a variable at sort cns).  Free variables are drawn
// from small per-sort pools so that non-linear rule patterns fire.
//
// Constructor and decoration arguments of typ and of the position
// operators come from a restricted fragment (variables, eta of an index,
// applications of a decoration variable, mu of variables).  Outside it,
// overlaps with the omitted position-compatibility laws appear that the
// rule set does not orient.
Term random_term(Sort sort, int depth, std::uint64_t seed);

struct FuzzCase {
  std::uint64_t seed;
  Term term;
  NormalizationResult lo;
  NormalizationResult ri;
};

struct FuzzReport {
  std::size_t terms = 0;
  std::size_t agreed = 0;
  std::size_t max_steps = 0;
  std::size_t exhausted = 0;
  std::vector<FuzzCase> disagreements;  // the first few
};

// Normalizes `count` random terms (sorts in rotation) under both
// strategies.  Term seeds are drawn from `seed` up front, so the report
// does not depend on `jobs`.
FuzzReport fuzz_confluence(std::size_t count, int depth, std::uint64_t seed, std::size_t budget = kDefaultBudget,
                           unsigned jobs = 1, std::size_t keep = 5);

}  // namespace opetopic
