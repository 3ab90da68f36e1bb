// Independent decision procedures used as test oracles: Fourier-Motzkin
// elimination with strict inequalities, and naive congruence closure.
#pragma once

#include <map>
#include <random>
#include <set>
#include <vector>

#include "lemlift/ir.hpp"

namespace lemlift::testing {

/// sum coeffs + constant (strict ? < : <=) 0
struct FmConstraint {
  std::map<TermId, Rational> coeffs;
  Rational constant = 0;
  bool strict = false;
};

inline bool fm_feasible(std::vector<FmConstraint> cs) {
  for (;;) {
    std::optional<TermId> pick;
    for (const auto& c : cs) {
      if (!c.coeffs.empty()) {
        pick = c.coeffs.begin()->first;
        break;
      }
    }
    if (!pick) break;
    TermId x = *pick;
    std::vector<FmConstraint> pos, neg, rest;
    for (auto& c : cs) {
      auto it = c.coeffs.find(x);
      if (it == c.coeffs.end()) {
        rest.push_back(std::move(c));
      } else if (it->second > 0) {
        pos.push_back(std::move(c));
      } else {
        neg.push_back(std::move(c));
      }
    }
    for (const auto& p : pos) {
      for (const auto& n : neg) {
        Rational kp = p.coeffs.at(x), kn = -n.coeffs.at(x);
        FmConstraint out;
        out.strict = p.strict || n.strict;
        out.constant = p.constant * kn + n.constant * kp;
        for (const auto& [v, c] : p.coeffs) out.coeffs[v] += c * kn;
        for (const auto& [v, c] : n.coeffs) out.coeffs[v] += c * kp;
        for (auto it = out.coeffs.begin(); it != out.coeffs.end();) {
          it = it->second == 0 ? out.coeffs.erase(it) : std::next(it);
        }
        rest.push_back(std::move(out));
      }
    }
    cs = std::move(rest);
  }
  for (const auto& c : cs) {
    if (c.strict ? !(c.constant < 0) : !(c.constant <= 0)) return false;
  }
  return true;
}

/// Satisfiability of a conjunction of arithmetic literals over the rationals.
inline bool lra_oracle_sat(const Context& ctx, const std::vector<Literal>& lits) {
  std::vector<FmConstraint> base;
  std::vector<FmConstraint> diseqs;  // f != 0 stored as f
  for (auto l : lits) {
    const auto& a = std::get<LinearAtom>(ctx.atoms().at(l.atom));
    FmConstraint f{a.lhs.coeffs, a.lhs.constant, false};
    FmConstraint negf = f;
    for (auto& [v, c] : negf.coeffs) c = -c;
    negf.constant = -negf.constant;
    switch (a.rel) {
      case Rel::Le:
        if (l.positive) {
          base.push_back(f);
        } else {
          negf.strict = true;
          base.push_back(negf);
        }
        break;
      case Rel::Lt:
        if (l.positive) {
          f.strict = true;
          base.push_back(f);
        } else {
          base.push_back(negf);
        }
        break;
      case Rel::Eq:
        if (l.positive) {
          base.push_back(f);
          base.push_back(negf);
        } else {
          diseqs.push_back(f);
        }
        break;
    }
  }
  // Each disequality splits into f < 0 or -f < 0.
  for (uint64_t bits = 0; bits < (uint64_t{1} << diseqs.size()); ++bits) {
    auto cs = base;
    for (size_t i = 0; i < diseqs.size(); ++i) {
      FmConstraint c = diseqs[i];
      if ((bits >> i) & 1u) {
        for (auto& [v, k] : c.coeffs) k = -k;
        c.constant = -c.constant;
      }
      c.strict = true;
      cs.push_back(std::move(c));
    }
    if (fm_feasible(std::move(cs))) return true;
  }
  return false;
}

/// Satisfiability of a conjunction of equality literals by fixpoint
/// congruence closure over every term of the context.
inline bool euf_oracle_sat(const Context& ctx, const std::vector<Literal>& lits) {
  size_t n = ctx.num_terms();
  std::vector<size_t> cls(n);
  for (size_t i = 0; i < n; ++i) cls[i] = i;
  auto join = [&](size_t a, size_t b) {
    size_t from = cls[a], to = cls[b];
    if (from == to) return false;
    for (auto& c : cls) {
      if (c == from) c = to;
    }
    return true;
  };
  for (auto l : lits) {
    if (!l.positive) continue;
    const auto& e = std::get<EqAtom>(ctx.atoms().at(l.atom));
    join(e.lhs, e.rhs);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (TermId s = 0; s < n; ++s) {
      for (TermId t = s + 1; t < n; ++t) {
        const auto& ns = ctx.term(s);
        const auto& nt = ctx.term(t);
        if (ns.args.empty() || ns.symbol != nt.symbol || cls[s] == cls[t]) continue;
        bool same = true;
        for (size_t i = 0; i < ns.args.size(); ++i) same = same && cls[ns.args[i]] == cls[nt.args[i]];
        if (same) changed |= join(s, t);
      }
    }
  }
  for (auto l : lits) {
    if (l.positive) continue;
    const auto& e = std::get<EqAtom>(ctx.atoms().at(l.atom));
    if (cls[e.lhs] == cls[e.rhs]) return false;
  }
  return true;
}

inline bool theory_oracle_sat(const Context& ctx, const std::vector<Literal>& lits) {
  bool lra = false;
  for (auto l : lits) lra |= theory_of(ctx.atoms().at(l.atom)) == TheoryKind::Lra;
  return lra ? lra_oracle_sat(ctx, lits) : euf_oracle_sat(ctx, lits);
}

/// Random arithmetic atoms over `vars` real variables.
inline std::vector<Literal> random_lra_atoms(Context& ctx, std::mt19937_64& rng, size_t vars, size_t count) {
  std::vector<TermId> xs;
  for (size_t i = 0; i < vars; ++i) xs.push_back(ctx.real_var("x" + std::to_string(i)));
  std::uniform_int_distribution<int> coeff(-3, 3), konst(-4, 4), op(0, 4);
  std::bernoulli_distribution use(0.6);
  std::vector<Literal> out;
  while (out.size() < count) {
    LinearExpr lhs;
    for (auto x : xs) {
      if (!use(rng)) continue;
      LinearExpr term = LinearExpr::variable(x);
      term *= Rational(coeff(rng));
      lhs += term;
    }
    auto r = ctx.mk_linear(lhs, static_cast<RelOp>(op(rng)), LinearExpr::constant_of(konst(rng)));
    if (auto* l = std::get_if<Literal>(&r)) out.push_back(*l);
  }
  return out;
}

/// Random equalities over constants a,b,c and terms built from f (unary) and
/// g (binary) up to depth two.
inline std::vector<Literal> random_euf_atoms(Context& ctx, std::mt19937_64& rng, size_t count) {
  ctx.declare_sort("U");
  Sort u = Sort::uninterpreted("U");
  std::vector<TermId> pool;
  for (const char* name : {"a", "b", "c"}) pool.push_back(ctx.constant(name, u));
  SymbolId f = ctx.declare_fun("f", {u}, u);
  SymbolId g = ctx.declare_fun("g", {u, u}, u);
  size_t base = pool.size();
  for (size_t i = 0; i < base; ++i) pool.push_back(ctx.app(f, {pool[i]}));
  pool.push_back(ctx.app(f, {pool[base]}));
  pool.push_back(ctx.app(g, {pool[0], pool[1]}));
  pool.push_back(ctx.app(g, {pool[1], pool[0]}));
  pool.push_back(ctx.app(g, {pool[base], pool[1]}));
  std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
  std::vector<Literal> out;
  while (out.size() < count) {
    auto r = ctx.mk_eq(pool[pick(rng)], pool[pick(rng)]);
    if (auto* l = std::get_if<Literal>(&r)) out.push_back(*l);
  }
  return out;
}

}  // namespace lemlift::testing
