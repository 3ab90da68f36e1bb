// Propositional literals and clauses, plus the T2P/P2T abstraction maps.
#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "lemlift/ir.hpp"

namespace lemlift::sat {

using Var = uint32_t;

/// Literal over a 0-based variable. DIMACS numbering is `var + 1`.
struct Lit {
  uint32_t x = 0;

  static constexpr Lit make(Var v, bool negative) { return Lit{(v << 1) | (negative ? 1u : 0u)}; }
  static Lit from_dimacs(int d) { return make(static_cast<Var>(std::abs(d) - 1), d < 0); }

  constexpr Var var() const { return x >> 1; }
  constexpr bool negative() const { return (x & 1u) != 0; }
  constexpr Lit operator~() const { return Lit{x ^ 1u}; }
  int to_dimacs() const { return negative() ? -static_cast<int>(var() + 1) : static_cast<int>(var() + 1); }

  auto operator<=>(const Lit&) const = default;
};

using BoolClause = std::vector<Lit>;

/// Sorted, duplicate-free copy of `c`.
BoolClause normalized(BoolClause c);
bool is_tautology(const BoolClause& normalized_clause);
std::string to_string(const BoolClause& c);

}  // namespace lemlift::sat

namespace lemlift {

/// Boolean abstraction: atom id `a` becomes variable `a`, polarity preserved.
sat::BoolClause t2p(const Clause& c);
sat::Lit t2p(Literal l);

/// Refinement. Throws Error when a variable has no atom in `table`.
Clause p2t(const sat::BoolClause& c, const AtomTable& table, Origin origin = Origin::learned());
Literal p2t(sat::Lit l, const AtomTable& table);

}  // namespace lemlift
