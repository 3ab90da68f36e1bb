// CDCL SAT engine with resolution-proof logging and assumption solving.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lemlift/boolean.hpp"

namespace lemlift::sat {

using ClauseId = uint32_t;
using ProofNodeId = uint32_t;

enum class Value : uint8_t { False = 0, True = 1, Undef = 2 };

// ---------------------------------------------------------------------------
// Resolution proofs
// ---------------------------------------------------------------------------

struct ProofNode {
  enum class Kind : uint8_t { Leaf, Resolvent };
  Kind kind = Kind::Leaf;
  ClauseId leaf = 0;  // Leaf: id of the input clause
  Var pivot = 0;      // Resolvent
  ProofNodeId left = 0;
  ProofNodeId right = 0;
  BoolClause clause;  // sorted
};

/// Append-only resolution DAG. Children always precede their parents.
class ProofLog {
 public:
  ProofNodeId add_leaf(ClauseId id, BoolClause clause);
  /// Resolves the clauses of `left` and `right` on `pivot`.
  ProofNodeId add_resolvent(Var pivot, ProofNodeId left, ProofNodeId right);
  void set_final(ProofNodeId n) { final_ = n; }

  const ProofNode& node(ProofNodeId n) const { return nodes_.at(n); }
  size_t size() const { return nodes_.size(); }
  std::optional<ProofNodeId> final_node() const { return final_; }

  /// Text trace, one node per line: "L <clause-id>" or
  /// "R <pivot> <left> <right>". Pivots are DIMACS variables; node references
  /// are 0-based line numbers. The last line is the final node.
  void write_trace(std::ostream& os) const;
  /// Rebuilds a proof from a trace. Leaf clauses are taken from `inputs`.
  static ProofLog read_trace(std::istream& is, std::span<const BoolClause> inputs);

  /// Testing hook: direct access to a node, e.g. to corrupt a pivot.
  ProofNode& mutable_node(ProofNodeId n) { return nodes_.at(n); }

 private:
  std::vector<ProofNode> nodes_;
  std::optional<ProofNodeId> final_;
};

/// Resolvent of `a` and `b` on `pivot`, or nullopt when the pivot does not
/// occur with opposite polarities.
std::optional<BoolClause> resolve(const BoolClause& a, const BoolClause& b, Var pivot);

struct ProofViolation {
  ProofNodeId node = 0;
  std::string message;
};

/// Independent proof checker. `inputs[id]` is the clause a leaf with id `id`
/// must carry. Returns nullopt when the proof derives the empty clause.
std::optional<ProofViolation> check_proof(const ProofLog& proof, std::span<const BoolClause> inputs);

/// Ids of the leaves reachable from the final node, ascending. Throws Error if
/// the proof has no final node or does not end in the empty clause.
std::vector<ClauseId> proof_core(const ProofLog& proof);

// ---------------------------------------------------------------------------
// Solver
// ---------------------------------------------------------------------------

enum class Status : uint8_t { Sat, Unsat, Unknown };

struct SatOptions {
  bool log_proof = false;
  double var_decay = 0.95;
  /// Local learned-clause minimization; each removal is a logged resolution.
  bool minimize = false;
  /// Geometric restarts. Unset means on, except when logging proofs.
  std::optional<bool> restarts;
  uint64_t restart_first = 100;
  double restart_factor = 1.5;
  /// Conflicts allowed per solve call; negative means unlimited.
  int64_t conflict_budget = -1;
  double random_decision_freq = 0.0;
  uint64_t seed = 0;
};

/// A clause handed to the solver by a theory during search.
struct TheoryClause {
  BoolClause lits;
  uint64_t tag = 0;
};

/// Callback interface used by the DPLL(T) engine.
class TheoryHook {
 public:
  virtual ~TheoryHook() = default;
  /// Called at every propagation fixpoint with the current trail and
  /// `complete` set when every variable is assigned. Clauses pushed into
  /// `out` must be false or unit under the current assignment.
  virtual void check(std::span<const Lit> trail, bool complete, std::vector<TheoryClause>& out) = 0;
  /// The solver undid every assignment above `level`.
  virtual void backjump(uint32_t level) = 0;
};

struct SatStats {
  uint64_t decisions = 0;
  uint64_t propagations = 0;
  uint64_t conflicts = 0;
  uint64_t restarts = 0;
  uint64_t theory_clauses = 0;
};

class SatSolver {
 public:
  static constexpr uint64_t kLearnedTag = ~uint64_t{0};

  explicit SatSolver(SatOptions options = {});

  Var new_var();
  void ensure_vars(size_t n);
  size_t num_vars() const { return assigns_.size(); }

  /// Adds an input clause between solve calls. `tag` is reported back by
  /// `clause_tag`. Returns the clause id.
  ClauseId add_clause(std::span<const Lit> lits, uint64_t tag = 0);

  Status solve(std::span<const Lit> assumptions = {});

  /// Model of the last Sat answer, indexed by variable.
  const std::vector<bool>& model() const { return model_; }
  /// After Unsat under assumptions: negations of the responsible assumptions.
  /// Empty when the clauses are unsatisfiable on their own.
  const BoolClause& final_conflict() const { return final_conflict_; }
  /// Valid after Unsat without assumptions when proofs are logged.
  const ProofLog& proof() const { return proof_; }
  bool inconsistent() const { return inconsistent_; }

  size_t num_clauses() const { return clauses_.size(); }
  const BoolClause& clause(ClauseId id) const { return clauses_.at(id).lits; }
  uint64_t clause_tag(ClauseId id) const { return clauses_.at(id).tag; }
  bool is_learned(ClauseId id) const { return clauses_.at(id).learned; }
  /// Clause texts indexed by id, as `check_proof` expects them.
  std::vector<BoolClause> clause_database() const;

  void set_theory(TheoryHook* hook) { theory_ = hook; }
  const SatStats& stats() const { return stats_; }

 private:
  struct ClauseData {
    BoolClause lits;  // lits[0], lits[1] are watched
    uint64_t tag = 0;
    bool learned = false;
    bool attached = false;
    ProofNodeId proof = 0;
  };
  static constexpr ClauseId kNoReason = ~ClauseId{0};

  Value value(Lit l) const;
  Value value(Var v) const { return assigns_[v]; }
  uint32_t level(Var v) const { return levels_[v]; }
  uint32_t decision_level() const { return static_cast<uint32_t>(trail_lim_.size()); }

  ClauseId store_clause(BoolClause lits, uint64_t tag, bool learned, ProofNodeId proof);
  void attach(ClauseId id);
  void order_for_watching(BoolClause& lits) const;
  void enqueue(Lit l, ClauseId reason);
  std::optional<ClauseId> propagate();
  void cancel_until(uint32_t level);
  void new_decision_level();

  /// Conflict analysis. Returns the learned clause (asserting literal first)
  /// and its proof node.
  std::pair<BoolClause, ProofNodeId> analyze(ClauseId conflict);
  /// Derives the empty clause from a clause falsified at level 0.
  void derive_empty(ClauseId conflict);
  /// Resolves level-0 literals out of `clause`, logging each step.
  void strip_level_zero(BoolClause& clause, ProofNodeId& node);
  ProofNodeId log_resolution(BoolClause& current, ProofNodeId current_node, Var pivot, ClauseId with);
  void analyze_final(Lit failed);
  /// Handles clauses returned by the theory; returns a conflict to analyze.
  std::optional<ClauseId> add_theory_clauses(std::vector<TheoryClause>& clauses);
  /// Learns from `conflict`; returns false when the empty clause was derived.
  bool resolve_conflict(ClauseId conflict);

  std::optional<Lit> pick_branch();
  void bump(Var v);
  void heap_insert(Var v);
  void heap_up(size_t i);
  void heap_down(size_t i);
  bool heap_less(Var a, Var b) const;

  SatOptions options_;
  bool restarts_enabled_;

  std::vector<ClauseData> clauses_;
  std::map<BoolClause, ClauseId> input_index_;  // first id of each non-learned clause
  std::vector<std::vector<ClauseId>> watches_;  // by literal index
  std::vector<Value> assigns_;
  std::vector<uint32_t> levels_;
  std::vector<ClauseId> reasons_;
  std::vector<bool> phase_;
  std::vector<Lit> trail_;
  std::vector<size_t> trail_lim_;
  size_t qhead_ = 0;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<Var> heap_;
  std::vector<int64_t> heap_pos_;

  std::vector<ClauseId> pending_conflicts_;
  bool inconsistent_ = false;
  std::vector<bool> model_;
  BoolClause final_conflict_;
  ProofLog proof_;
  TheoryHook* theory_ = nullptr;
  std::vector<Lit> assumptions_;
  std::mt19937_64 rng_;
  SatStats stats_;
  std::vector<uint8_t> seen_;
};

// ---------------------------------------------------------------------------
// One-shot entry points
// ---------------------------------------------------------------------------

struct SatVerdict {
  Status status = Status::Unknown;
  std::vector<bool> model;    // Sat
  ProofLog proof;             // Unsat, when logged; leaf ids index the input
  BoolClause final_conflict;  // Unsat under assumptions
};

/// Solves `clauses` over `num_vars` variables (at least every variable used).
SatVerdict sat_solve(std::span<const BoolClause> clauses, std::span<const Lit> assumptions = {},
                     SatOptions options = {}, size_t num_vars = 0);

struct SelectorResult {
  Status status = Status::Unknown;
  std::vector<uint32_t> core;  // indices into the input, ascending
  BoolClause final_conflict;   // over selector literals
};

/// Adds a fresh selector S_i to every clause as (not S_i or C_i), assumes all
/// selectors and reads the core off the final conflict clause.
SelectorResult solve_with_selectors(std::span<const BoolClause> clauses, SatOptions options = {},
                                    size_t num_vars = 0);

}  // namespace lemlift::sat
