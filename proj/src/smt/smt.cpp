#include "lemlift/smt.hpp"

#include <algorithm>

namespace lemlift::smt {

uint32_t TLemmaStore::add(std::vector<Literal> lits, TLemma::Kind kind) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  auto [it, inserted] = index_.emplace(lits, static_cast<uint32_t>(lemmas_.size()));
  if (inserted) {
    auto seq = static_cast<uint32_t>(lemmas_.size());
    lemmas_.push_back({Clause::make(std::move(lits), Origin::lemma(seq)), kind, seq});
  }
  return it->second;
}

TheoryKind theory_for(Logic logic) {
  switch (logic) {
    case Logic::Euf:
      return TheoryKind::Euf;
    case Logic::Lra:
      return TheoryKind::Lra;
    case Logic::Propositional:
      break;
  }
  return TheoryKind::None;
}

namespace {

// Clause tags: original index i is 2i, lemma k is 2k + 1.
uint64_t original_tag(uint32_t i) { return uint64_t{i} * 2; }
uint64_t lemma_tag(uint32_t k) { return uint64_t{k} * 2 + 1; }

}  // namespace

// Keeps the theory solver asserted with exactly the theory literals on the SAT
// trail. After a backjump the common prefix of the processed literals and the
// new trail is kept and the rest replayed from the nearest mark.
class SmtSolver::Hook final : public sat::TheoryHook {
 public:
  Hook(SmtSolver& owner, std::unique_ptr<theory::TheorySolver> solver, const SmtOptions& options)
      : owner_(owner), solver_(std::move(solver)), options_(options) {}

  void check(std::span<const sat::Lit> trail, bool complete, std::vector<sat::TheoryClause>& out) override {
    sync(trail);
    if (processed_.size() < trail.size()) {
      marks_.push_back({processed_.size(), solver_->mark()});
      while (processed_.size() < trail.size()) {
        sat::Lit l = trail[processed_.size()];
        processed_.push_back(l);
        if (!is_theory(l.var())) continue;
        if (auto conflict = solver_->assert_literal(p2t(l, owner_.ctx_->atoms()))) {
          emit_conflict(*conflict, out);
          return;
        }
      }
    }
    if (!complete && !options_.early_pruning) return;
    auto verdict = solver_->check_full();
    if (!verdict.sat) {
      emit_conflict(verdict.conflict, out);
      return;
    }
    if (complete) owner_.witness_ = std::move(verdict.witness);
    if (options_.theory_propagation && !complete) {
      for (auto& d : solver_->deductions()) {
        std::vector<Literal> lits{d.implied};
        for (auto e : d.explanation) lits.push_back(~e);
        emit(std::move(lits), TLemma::Kind::Deduction, out);
      }
    }
  }

  void backjump(uint32_t) override { shrunk_ = true; }

 private:
  bool is_theory(sat::Var v) const {
    const auto& atoms = owner_.ctx_->atoms();
    return v < atoms.size() && theory_of(atoms.at(v)) == solver_->kind();
  }

  void sync(std::span<const sat::Lit> trail) {
    if (!shrunk_) return;
    shrunk_ = false;
    size_t keep = 0;
    while (keep < processed_.size() && keep < trail.size() && processed_[keep] == trail[keep]) ++keep;
    if (keep == processed_.size()) return;
    while (!marks_.empty() && marks_.back().first > keep) marks_.pop_back();
    if (!marks_.empty() && marks_.back().first == keep) {
      solver_->backtrack(marks_.back().second);
      marks_.pop_back();
    } else if (!marks_.empty()) {
      // The nearest mark lies below the kept prefix: replay the gap.
      auto [pos, mark] = marks_.back();
      marks_.pop_back();
      solver_->backtrack(mark);
      processed_.resize(pos);
      marks_.push_back({pos, solver_->mark()});
      for (size_t i = pos; i < keep; ++i) {
        processed_.push_back(trail[i]);
        if (is_theory(trail[i].var())) solver_->assert_literal(p2t(trail[i], owner_.ctx_->atoms()));
      }
      return;
    }
    processed_.resize(keep);
  }

  void emit_conflict(const std::vector<Literal>& conflict, std::vector<sat::TheoryClause>& out) {
    std::vector<Literal> lits;
    for (auto l : conflict) lits.push_back(~l);
    emit(std::move(lits), TLemma::Kind::Conflict, out);
  }

  void emit(std::vector<Literal> lits, TLemma::Kind kind, std::vector<sat::TheoryClause>& out) {
    uint32_t k = owner_.lemmas_.add(lits, kind);
    const Clause& stored = owner_.lemmas_[k].clause;
    out.push_back({t2p(stored), lemma_tag(k)});
  }

  SmtSolver& owner_;
  std::unique_ptr<theory::TheorySolver> solver_;
  SmtOptions options_;
  std::vector<sat::Lit> processed_;
  std::vector<std::pair<size_t, theory::Mark>> marks_;  // processed_ size at mark
  bool shrunk_ = false;
};

namespace {

sat::SatOptions sat_options(const SmtOptions& o) {
  sat::SatOptions s;
  s.log_proof = o.log_proof;
  s.conflict_budget = o.conflict_budget;
  s.seed = o.seed;
  return s;
}

}  // namespace

SmtSolver::SmtSolver(std::shared_ptr<const Context> ctx, TheoryKind kind, SmtOptions options)
    : ctx_(std::move(ctx)), sat_(sat_options(options)) {
  sat_.ensure_vars(ctx_->atoms().size());
  if (kind != TheoryKind::None) {
    hook_ = std::make_unique<Hook>(*this, theory::make_solver(ctx_, kind), options);
    sat_.set_theory(hook_.get());
  }
}

SmtSolver::~SmtSolver() = default;

sat::Var SmtSolver::new_var() { return sat_.new_var(); }

sat::ClauseId SmtSolver::add_clause(std::span<const sat::Lit> lits, uint32_t index) {
  return sat_.add_clause(lits, original_tag(index));
}

sat::ClauseId SmtSolver::add_clause(const Clause& c) {
  auto lits = t2p(c);
  return add_clause(lits, c.origin.index);
}

Status SmtSolver::solve(std::span<const sat::Lit> assumptions) {
  witness_ = {};
  return sat_.solve(assumptions);
}

Origin SmtSolver::origin_of(sat::ClauseId id) const {
  uint64_t tag = sat_.clause_tag(id);
  if (sat_.is_learned(id) || tag == sat::SatSolver::kLearnedTag) return Origin::learned();
  if (tag % 2 == 1) return Origin::lemma(static_cast<uint32_t>(tag / 2));
  return Origin::original(static_cast<uint32_t>(tag / 2), 0);
}

SmtResult smt_solve(const Formula& formula, SmtOptions options) {
  SmtSolver solver(formula.context_ptr(), theory_for(formula.logic()), options);
  for (const auto& c : formula.clauses()) solver.add_clause(c);
  SmtResult result;
  result.status = solver.solve();
  if (result.status == Status::Sat) {
    const auto& m = solver.model();
    result.model.assign(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(formula.context().atoms().size()));
    result.witness = solver.witness();
  }
  result.lemmas = solver.lemmas();
  result.stats = solver.sat().stats();
  return result;
}

bool model_satisfies(const Formula& formula, const std::vector<bool>& model, const theory::Witness& witness) {
  const Context& ctx = formula.context();
  for (const auto& c : formula.clauses()) {
    bool sat = false;
    for (auto l : c.lits) {
      auto v = theory::evaluate(ctx, witness, l.atom);
      bool value = v ? *v : (l.atom < model.size() && model[l.atom]);
      if (value == l.positive) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

std::vector<FactViolation> check_lemma_facts(const Formula& formula, const TLemmaStore& lemmas, bool unsat) {
  std::vector<FactViolation> out;
  const Context& ctx = formula.context();
  for (const auto& lemma : lemmas.lemmas()) {
    auto check = theory::is_valid_lemma(formula.context_ptr(), lemma.clause);
    if (!check.valid) {
      std::string text;
      for (auto l : lemma.clause.lits) text += " " + ctx.literal_to_string(l);
      out.push_back({"lemma " + std::to_string(lemma.seq) + " is not theory-valid:" + text});
    }
  }
  if (unsat) {
    std::vector<sat::BoolClause> cnf;
    for (const auto& c : formula.clauses()) cnf.push_back(t2p(c));
    for (const auto& lemma : lemmas.lemmas()) cnf.push_back(t2p(lemma.clause));
    auto verdict = sat::sat_solve(cnf, {}, {}, ctx.atoms().size());
    if (verdict.status != Status::Unsat) out.push_back({"abstraction plus lemmas is propositionally satisfiable"});
  }
  return out;
}

}  // namespace lemlift::smt
