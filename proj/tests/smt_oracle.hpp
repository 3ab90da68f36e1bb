// Random small SMT formulas and a brute-force satisfiability oracle.
#pragma once

#include <random>

#include "theory_oracle.hpp"

namespace lemlift::testing {

/// Enumerates every total assignment to the atoms used by `formula`; sat iff
/// one satisfies all clauses and its theory literals are consistent.
inline bool smt_oracle_sat(const Formula& formula) {
  const Context& ctx = formula.context();
  std::vector<AtomId> used;
  for (const auto& c : formula.clauses()) {
    for (auto l : c.lits) {
      if (std::find(used.begin(), used.end(), l.atom) == used.end()) used.push_back(l.atom);
    }
  }
  std::vector<bool> value(ctx.atoms().size());
  for (uint64_t bits = 0; bits < (uint64_t{1} << used.size()); ++bits) {
    for (size_t i = 0; i < used.size(); ++i) value[used[i]] = (bits >> i) & 1u;
    bool all = true;
    for (const auto& c : formula.clauses()) {
      bool sat = false;
      for (auto l : c.lits) sat |= value[l.atom] == l.positive;
      if (!sat) {
        all = false;
        break;
      }
    }
    if (!all) continue;
    std::vector<Literal> theory_lits;
    for (auto a : used) {
      if (theory_of(ctx.atoms().at(a)) != TheoryKind::None) theory_lits.push_back({a, value[a]});
    }
    if (theory_lits.empty() || theory_oracle_sat(ctx, theory_lits)) return true;
  }
  return false;
}

/// Random CNF over at most six theory atoms plus one propositional atom,
/// at most eight clauses.
inline Formula random_formula(std::mt19937_64& rng, TheoryKind kind, size_t max_clauses = 8) {
  auto ctx = std::make_shared<Context>();
  std::vector<Literal> atoms = kind == TheoryKind::Lra ? random_lra_atoms(*ctx, rng, 2, 5) : random_euf_atoms(*ctx, rng, 5);
  atoms.push_back(ctx->mk_bool("p"));
  std::uniform_int_distribution<size_t> nclauses(2, max_clauses), width(1, 3), pick(0, atoms.size() - 1);
  std::bernoulli_distribution neg(0.5);
  std::vector<Clause> clauses;
  size_t n = nclauses(rng);
  while (clauses.size() < n) {
    std::vector<Literal> lits;
    size_t w = width(rng);
    for (size_t i = 0; i < w; ++i) {
      Literal l = atoms[pick(rng)];
      lits.push_back(neg(rng) ? ~l : l);
    }
    bool taut = false;
    for (auto a : lits) {
      for (auto b : lits) taut |= a == ~b;
    }
    if (taut) continue;
    auto i = static_cast<uint32_t>(clauses.size());
    clauses.push_back(Clause::make(std::move(lits), Origin::original(i, i)));
  }
  return Formula(ctx, std::move(clauses), static_cast<uint32_t>(n));
}

}  // namespace lemlift::testing

namespace lemlift::testing {

/// The first `count` unsatisfiable random formulas of `kind`, by seed.
inline std::vector<Formula> unsat_corpus(TheoryKind kind, size_t count, uint64_t first_seed = 0) {
  std::vector<Formula> out;
  for (uint64_t seed = first_seed; out.size() < count; ++seed) {
    std::mt19937_64 rng(seed);
    auto f = random_formula(rng, kind);
    if (!smt_oracle_sat(f)) out.push_back(std::move(f));
  }
  return out;
}

}  // namespace lemlift::testing
