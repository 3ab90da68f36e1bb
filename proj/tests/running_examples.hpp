// The running example formulas, built directly in the IR.
#pragma once

#include <memory>

#include "lemlift/ir.hpp"

namespace lemlift::testing {

inline LinearExpr lin_var(TermId t, int k = 1) {
  auto e = LinearExpr::variable(t);
  e *= Rational(k);
  return e;
}

inline LinearExpr lin_num(int k) { return LinearExpr::constant_of(k); }

inline Literal as_lit(Context::LitOrConst r) { return std::get<Literal>(r); }

/// c1..c9 over x, y, A1, A2; atoms interned in clause order. `lemmas`, when
/// given, receives the three theory lemmas of the lifted core of uc_2.
inline Formula example1(std::vector<Clause>* lemmas = nullptr) {
  auto ctx = std::make_shared<Context>();
  TermId x = ctx->real_var("x");
  TermId y = ctx->real_var("y");
  auto x0 = as_lit(ctx->mk_linear(lin_var(x), RelOp::Eq, lin_num(0)));
  auto x1 = as_lit(ctx->mk_linear(lin_var(x), RelOp::Eq, lin_num(1)));
  auto a1 = ctx->mk_bool("A1");
  auto a2 = ctx->mk_bool("A2");
  auto y1 = as_lit(ctx->mk_linear(lin_var(y), RelOp::Eq, lin_num(1)));
  auto sum = lin_var(x);
  sum += lin_var(y);
  auto gt3 = as_lit(ctx->mk_linear(sum, RelOp::Gt, lin_num(3)));
  auto ylt0 = as_lit(ctx->mk_linear(lin_var(y), RelOp::Lt, lin_num(0)));
  auto diff = lin_var(x);
  diff -= lin_var(y);
  auto d4 = as_lit(ctx->mk_linear(diff, RelOp::Eq, lin_num(4)));
  auto y2 = as_lit(ctx->mk_linear(lin_var(y), RelOp::Eq, lin_num(2)));
  auto xge0 = as_lit(ctx->mk_linear(lin_var(x), RelOp::Ge, lin_num(0)));
  std::vector<std::vector<Literal>> rows{
      {x0, ~x1, a1}, {x0, x1, a2}, {~x0, x1, a2}, {~a2, y1}, {~a1, gt3}, {ylt0}, {a2, d4}, {y2, ~a1}, {xge0},
  };
  std::vector<Clause> clauses;
  for (uint32_t i = 0; i < rows.size(); ++i) clauses.push_back(Clause::make(rows[i], Origin::original(i, i)));
  if (lemmas) {
    *lemmas = {Clause::make({~x1, ~x0}, Origin::lemma(0)), Clause::make({~y2, ~ylt0}, Origin::lemma(1)),
               Clause::make({~y1, ~ylt0}, Origin::lemma(2))};
  }
  return Formula(ctx, std::move(clauses), static_cast<uint32_t>(rows.size()));
}

/// The four two-literal clauses over x = 0 and x = 1.
inline Formula example5() {
  auto ctx = std::make_shared<Context>();
  TermId x = ctx->real_var("x");
  auto b1 = as_lit(ctx->mk_linear(lin_var(x), RelOp::Eq, lin_num(0)));
  auto b2 = as_lit(ctx->mk_linear(lin_var(x), RelOp::Eq, lin_num(1)));
  std::vector<std::vector<Literal>> rows{{b1, b2}, {~b1, b2}, {b1, ~b2}, {~b1, ~b2}};
  std::vector<Clause> clauses;
  for (uint32_t i = 0; i < rows.size(); ++i) clauses.push_back(Clause::make(rows[i], Origin::original(i, i)));
  return Formula(ctx, std::move(clauses), 4);
}

}  // namespace lemlift::testing
