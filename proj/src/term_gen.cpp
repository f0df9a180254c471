#include "opetopic/term_gen.hpp"

#include <algorithm>
#include <future>
#include <random>
#include <string>
#include <vector>

namespace opetopic {

namespace {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  Term term(Sort s, int depth) {
    if (depth <= 1 || chance(25)) return leaf(s);
    switch (s) {
      case Sort::Idx: return idx(depth);
      case Sort::Cns: return cns(depth);
      case Sort::Pos: return pos(depth);
      case Sort::Dec: return dec(depth);
      case Sort::Opaque: return opaque(depth);
    }
    return leaf(s);
  }

 private:
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool chance(int percent) { return static_cast<int>(pick(100)) < percent; }

  Term var(Sort s) {
    static const char* pools[] = {"i", "j", "c", "k", "p", "q", "d", "g", "u", "v"};
    if (s == Sort::Pos && !scope_.empty() && chance(60)) return Term::var(scope_[pick(scope_.size())], Sort::Pos);
    return Term::var(pools[2 * static_cast<std::size_t>(s) + pick(2)], s);
  }

  Term leaf(Sort s) {
    if (s == Sort::Cns && chance(40)) return Term::eta(var(Sort::Idx));
    return var(s);
  }

  // Restricted constructor fragment for typ and position annotations.
  Term typ_cns(int depth) {
    switch (pick(4)) {
      case 0: return var(Sort::Cns);
      case 1: return Term::eta(depth > 1 ? term(Sort::Idx, depth - 1) : var(Sort::Idx));
      case 2: return Term::app(var(Sort::Dec), depth > 1 ? term(Sort::Pos, depth - 1) : var(Sort::Pos));
      default: return Term::mu(ann_cns(depth - 1), var(Sort::Dec));
    }
  }
  Term ann_cns(int depth) {
    if (depth > 1 && chance(35)) return Term::app(var(Sort::Dec), term(Sort::Pos, depth - 1));
    return var(Sort::Cns);
  }

  Term idx(int depth) {
    if (chance(30)) return var(Sort::Idx);
    return Term::typ(typ_cns(depth - 1), term(Sort::Pos, depth - 1));
  }

  Term cns(int depth) {
    switch (pick(depth >= 4 ? 8 : 4)) {
      case 0: return Term::eta(term(Sort::Idx, depth - 1));
      case 1: return Term::mu(term(Sort::Cns, depth - 1), term(Sort::Dec, depth - 1));
      case 2: return Term::app(term(Sort::Dec, depth - 1), term(Sort::Pos, depth - 1));
      case 3: return var(Sort::Cns);
      case 4: {
        Term c = typ_cns(depth - 3);
        std::string x = binder();
        return Term::mu(c, Term::lam(x, Term::eta(Term::typ(c, Term::var(x, Sort::Pos)))));
      }
      case 5: return Term::mu(Term::eta(term(Sort::Idx, depth - 2)), term(Sort::Dec, depth - 1));
      case 6:
        return Term::mu(Term::mu(term(Sort::Cns, depth - 2), term(Sort::Dec, depth - 2)),
                        term(Sort::Dec, depth - 1));
      default: return Term::app(lam(depth - 1), term(Sort::Pos, depth - 1));
    }
  }

  Term pos(int depth) {
    switch (pick(depth >= 4 ? 7 : 5)) {
      case 0: return Term::eta_pos(term(Sort::Idx, depth - 1));
      case 1: return Term::mu_pos(ann_cns(depth - 1), var(Sort::Dec), term(Sort::Pos, depth - 1),
                                  term(Sort::Pos, depth - 1));
      case 2: return Term::mu_fst(ann_cns(depth - 1), var(Sort::Dec), term(Sort::Pos, depth - 1));
      case 3: return Term::mu_snd(ann_cns(depth - 1), var(Sort::Dec), term(Sort::Pos, depth - 1));
      case 4: return var(Sort::Pos);
      case 5: {
        Term c = ann_cns(depth - 3);
        Term d = var(Sort::Dec);
        Term inner = Term::mu_pos(c, d, term(Sort::Pos, depth - 3), term(Sort::Pos, depth - 3));
        return chance(50) ? Term::mu_fst(c, d, inner) : Term::mu_snd(c, d, inner);
      }
      default: {
        Term c = ann_cns(depth - 3);
        Term d = var(Sort::Dec);
        Term x = term(Sort::Pos, depth - 2);
        return Term::mu_pos(c, d, Term::mu_fst(c, d, x), Term::mu_snd(c, d, x));
      }
    }
  }

  std::string binder() {
    static const char* names[3] = {"x", "y", "z"};
    return names[pick(3)];
  }

  Term lam(int depth) {
    std::string x = binder();
    scope_.push_back(x);
    Term body = term(Sort::Cns, depth - 1);
    scope_.pop_back();
    return Term::lam(x, body);
  }

  Term dec(int depth) {
    switch (pick(depth >= 3 ? 4 : 2)) {
      case 0: return var(Sort::Dec);
      case 1: return lam(depth);
      case 2: {
        Term c = typ_cns(depth - 2);
        std::string x = binder();
        return Term::lam(x, Term::eta(Term::typ(c, Term::var(x, Sort::Pos))));
      }
      default: {
        std::string x = binder();
        return Term::lam(x, Term::app(var(Sort::Dec), Term::var(x, Sort::Pos)));
      }
    }
  }

  Term opaque(int depth) {
    if (chance(20)) return var(Sort::Opaque);
    Term i = term(Sort::Idx, depth - 1);
    Term p = chance(50) ? Term::eta_pos(i) : term(Sort::Pos, depth - 1);
    return Term::eta_pos_elim(i, term(Sort::Opaque, depth - 1), p);
  }

  std::mt19937_64 rng_;
  std::vector<std::string> scope_;
};

}  // namespace

Term random_term(Sort sort, int depth, std::uint64_t seed) {
  Gen g(seed);
  return g.term(sort, depth < 1 ? 1 : depth);
}

FuzzReport fuzz_confluence(std::size_t count, int depth, std::uint64_t seed, std::size_t budget, unsigned jobs,
                           std::size_t keep) {
  static const Sort sorts[] = {Sort::Idx, Sort::Cns, Sort::Pos, Sort::Dec, Sort::Opaque};
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> seeds(count);
  for (auto& s : seeds) s = rng();

  struct Outcome {
    bool agree = false;
    std::size_t steps = 0;
    bool exhausted = false;
  };
  std::vector<Outcome> outcomes(count);
  auto run = [&](std::size_t k) {
    Term t = random_term(sorts[k % 5], depth, seeds[k]);
    auto a = normalize(t, Strategy::LeftmostOutermost, budget, {}, false);
    auto b = normalize(t, Strategy::RightmostInnermost, budget, {}, false);
    Outcome& o = outcomes[k];
    o.exhausted = a.exhausted_budget || b.exhausted_budget;
    o.steps = std::max(a.steps, b.steps);
    o.agree = !o.exhausted && alpha_eq(a.normal_form, b.normal_form);
  };
  unsigned n = std::max(1u, jobs);
  if (n == 1) {
    for (std::size_t k = 0; k < count; ++k) run(k);
  } else {
    std::vector<std::future<void>> workers;
    for (unsigned w = 0; w < n; ++w)
      workers.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t k = w; k < count; k += n) run(k);
      }));
    for (auto& w : workers) w.get();
  }

  FuzzReport r;
  r.terms = count;
  for (std::size_t k = 0; k < count; ++k) {
    const Outcome& o = outcomes[k];
    r.max_steps = std::max(r.max_steps, o.steps);
    if (o.exhausted) ++r.exhausted;
    if (o.agree) {
      ++r.agreed;
    } else if (r.disagreements.size() < keep) {
      Term t = random_term(sorts[k % 5], depth, seeds[k]);
      r.disagreements.push_back({seeds[k], t, normalize(t, Strategy::LeftmostOutermost, budget, {}, false),
                                 normalize(t, Strategy::RightmostInnermost, budget, {}, false)});
    }
  }
  return r;
}

}  // namespace opetopic
