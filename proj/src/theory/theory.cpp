#include "lemlift/theory.hpp"

#include "solvers.hpp"

namespace lemlift::theory {

Mark TheorySolver::mark() {
  push_state();
  Mark m{next_serial_++};
  marks_.emplace_back(m.serial, asserted_.size());
  return m;
}

void TheorySolver::backtrack(Mark m) {
  size_t i = 0;
  while (i < marks_.size() && marks_[i].first != m.serial) ++i;
  if (i == marks_.size()) throw Error("backtrack to a mark that is no longer live");
  for (size_t k = marks_.size(); k > i; --k) pop_state();
  size_t keep = marks_[i].second;
  for (size_t j = keep; j < asserted_.size(); ++j) asserted_atom_[asserted_[j].atom] = 0;
  asserted_.resize(keep);
  marks_.resize(i);
}

bool TheorySolver::is_asserted(AtomId a) const { return a < asserted_atom_.size() && asserted_atom_[a]; }

void TheorySolver::record_assertion(Literal lit) {
  if (lit.atom >= asserted_atom_.size()) asserted_atom_.resize(lit.atom + 1, 0);
  asserted_atom_[lit.atom] = 1;
  asserted_.push_back(lit);
}

std::unique_ptr<TheorySolver> make_solver(std::shared_ptr<const Context> ctx, TheoryKind kind) {
  switch (kind) {
    case TheoryKind::Euf:
      return std::make_unique<EufSolver>(std::move(ctx));
    case TheoryKind::Lra:
      return std::make_unique<LraSolver>(std::move(ctx));
    case TheoryKind::None:
      break;
  }
  throw Error("no theory solver for Boolean atoms");
}

LemmaCheck is_valid_lemma(std::shared_ptr<const Context> ctx, const Clause& clause) {
  TheoryKind kind = TheoryKind::None;
  for (auto l : clause.lits) {
    TheoryKind k = theory_of(ctx->atoms().at(l.atom));
    if (k == TheoryKind::None) continue;
    if (kind != TheoryKind::None && k != kind) throw Error("clause mixes equality and arithmetic literals");
    kind = k;
  }
  LemmaCheck result;
  if (kind == TheoryKind::None) return result;
  auto solver = make_solver(ctx, kind);
  for (auto l : clause.lits) {
    if (theory_of(ctx->atoms().at(l.atom)) == TheoryKind::None) continue;
    if (solver->assert_literal(~l)) {
      result.valid = true;
      return result;
    }
  }
  auto verdict = solver->check_full();
  result.valid = !verdict.sat;
  if (verdict.sat) result.countermodel = std::move(verdict.witness);
  return result;
}

std::optional<bool> evaluate(const Context& ctx, const Witness& w, AtomId atom) {
  const auto& a = ctx.atoms().at(atom);
  if (const auto* lin = std::get_if<LinearAtom>(&a)) {
    Rational sum = lin->lhs.constant;
    for (const auto& [t, c] : lin->lhs.coeffs) {
      auto it = w.reals.find(t);
      if (it != w.reals.end()) sum += c * it->second;
    }
    switch (lin->rel) {
      case Rel::Le:
        return sum <= 0;
      case Rel::Lt:
        return sum < 0;
      case Rel::Eq:
        return sum == 0;
    }
  }
  if (const auto* eq = std::get_if<EqAtom>(&a)) {
    auto l = w.classes.find(eq->lhs), r = w.classes.find(eq->rhs);
    if (l == w.classes.end() || r == w.classes.end()) return eq->lhs == eq->rhs;
    return l->second == r->second;
  }
  return std::nullopt;
}

}  // namespace lemlift::theory
