// Lazy DPLL(T): the CDCL engine driven together with one theory solver, with
// every theory lemma recorded.
#pragma once

#include <map>
#include <memory>
#include <vector>

#include "lemlift/boolean.hpp"
#include "lemlift/sat.hpp"
#include "lemlift/theory.hpp"

namespace lemlift::smt {

using sat::Status;

struct TLemma {
  enum class Kind : uint8_t { Conflict, Deduction };
  Clause clause;  // origin is TLemma(seq)
  Kind kind = Kind::Conflict;
  uint32_t seq = 0;
};

/// Append-only, deduplicated on the sorted literal list.
class TLemmaStore {
 public:
  /// Returns the index of the stored lemma, which may be an earlier equal one.
  uint32_t add(std::vector<Literal> lits, TLemma::Kind kind);
  const std::vector<TLemma>& lemmas() const { return lemmas_; }
  size_t size() const { return lemmas_.size(); }
  bool empty() const { return lemmas_.empty(); }
  const TLemma& operator[](size_t i) const { return lemmas_.at(i); }

 private:
  std::vector<TLemma> lemmas_;
  std::map<std::vector<Literal>, uint32_t> index_;
};

struct SmtOptions {
  bool early_pruning = true;
  bool theory_propagation = true;
  int64_t conflict_budget = -1;
  uint64_t seed = 0;
  /// Resolution proof over originals and lemmas (turns restarts off).
  bool log_proof = false;
};

TheoryKind theory_for(Logic logic);

/// Incremental engine. Boolean variable `a` is atom `a`; variables created by
/// `new_var` lie beyond the atom table and carry no theory meaning.
class SmtSolver {
 public:
  SmtSolver(std::shared_ptr<const Context> ctx, TheoryKind kind, SmtOptions options = {});
  ~SmtSolver();
  SmtSolver(const SmtSolver&) = delete;
  SmtSolver& operator=(const SmtSolver&) = delete;

  sat::Var new_var();
  /// Adds an original clause tagged with input index `index`.
  sat::ClauseId add_clause(std::span<const sat::Lit> lits, uint32_t index);
  sat::ClauseId add_clause(const Clause& c);

  Status solve(std::span<const sat::Lit> assumptions = {});

  const TLemmaStore& lemmas() const { return lemmas_; }
  /// Boolean model over all variables after Sat.
  const std::vector<bool>& model() const { return sat_.model(); }
  /// Theory model of the last Sat answer.
  const theory::Witness& witness() const { return witness_; }
  const sat::BoolClause& final_conflict() const { return sat_.final_conflict(); }
  const sat::ProofLog& proof() const { return sat_.proof(); }
  /// Origin of a clause of the underlying SAT engine.
  Origin origin_of(sat::ClauseId id) const;
  const sat::SatSolver& sat() const { return sat_; }
  const Context& context() const { return *ctx_; }

 private:
  class Hook;

  std::shared_ptr<const Context> ctx_;
  sat::SatSolver sat_;
  TLemmaStore lemmas_;
  theory::Witness witness_;
  std::unique_ptr<Hook> hook_;
};

struct SmtResult {
  Status status = Status::Unknown;
  std::vector<bool> model;  // by atom id, Sat only
  theory::Witness witness;  // Sat only
  TLemmaStore lemmas;
  sat::SatStats stats;
};

SmtResult smt_solve(const Formula& formula, SmtOptions options = {});

/// True when every clause of `formula` holds under the model and witness.
bool model_satisfies(const Formula& formula, const std::vector<bool>& model, const theory::Witness& witness);

struct FactViolation {
  std::string message;
};

/// Validity of every stored lemma, and, for an unsat run, propositional
/// unsatisfiability of the abstraction plus lemmas by an independent SAT run.
std::vector<FactViolation> check_lemma_facts(const Formula& formula, const TLemmaStore& lemmas, bool unsat);

}  // namespace lemlift::smt
