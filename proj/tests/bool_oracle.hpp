// Truth-table oracle and random CNF generation for tests.
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "lemlift/boolean.hpp"

namespace lemlift::testing {

inline sat::BoolClause dimacs_clause(std::initializer_list<int> lits) {
  sat::BoolClause c;
  for (int l : lits) c.push_back(sat::Lit::from_dimacs(l));
  return c;
}

inline bool satisfies(const std::vector<bool>& model, const sat::BoolClause& c) {
  for (auto l : c) {
    if (l.var() < model.size() && model[l.var()] != l.negative()) return true;
  }
  return false;
}

inline size_t max_var(std::span<const sat::BoolClause> clauses) {
  size_t n = 0;
  for (const auto& c : clauses) {
    for (auto l : c) n = std::max<size_t>(n, l.var() + 1);
  }
  return n;
}

/// Exhaustive enumeration over all 2^n assignments.
inline bool brute_force_sat(std::span<const sat::BoolClause> clauses, size_t num_vars = 0) {
  size_t n = std::max(num_vars, max_var(clauses));
  std::vector<bool> model(n);
  for (uint64_t bits = 0; bits < (uint64_t{1} << n); ++bits) {
    for (size_t v = 0; v < n; ++v) model[v] = (bits >> v) & 1u;
    bool all = true;
    for (const auto& c : clauses) {
      if (!satisfies(model, c)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

inline std::vector<sat::BoolClause> subset_of(std::span<const sat::BoolClause> clauses,
                                              std::span<const uint32_t> indices) {
  std::vector<sat::BoolClause> out;
  for (auto i : indices) out.push_back(clauses[i]);
  return out;
}

/// Random k-CNF-ish instance: clause widths 1..max_width, distinct variables.
inline std::vector<sat::BoolClause> random_cnf(std::mt19937_64& rng, size_t vars, size_t clauses,
                                               size_t max_width = 3) {
  std::uniform_int_distribution<size_t> width(1, max_width);
  std::uniform_int_distribution<uint32_t> var(0, static_cast<uint32_t>(vars - 1));
  std::bernoulli_distribution sign(0.5);
  std::vector<sat::BoolClause> out;
  for (size_t i = 0; i < clauses; ++i) {
    sat::BoolClause c;
    size_t w = std::min(width(rng), vars);
    while (c.size() < w) {
      auto v = var(rng);
      bool dup = false;
      for (auto l : c) dup |= l.var() == v;
      if (!dup) c.push_back(sat::Lit::make(v, sign(rng)));
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace lemlift::testing
