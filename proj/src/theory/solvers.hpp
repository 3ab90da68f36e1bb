// Concrete theory solvers. Internal header.
#pragma once

#include <optional>
#include <vector>

#include "lemlift/theory.hpp"

namespace lemlift::theory {

/// General simplex over delta-rationals with Bland's pivoting rule.
class LraSolver final : public TheorySolver {
 public:
  explicit LraSolver(std::shared_ptr<const Context> ctx);

  TheoryKind kind() const override { return TheoryKind::Lra; }
  std::optional<std::vector<Literal>> assert_literal(Literal lit) override;
  TheoryVerdict check_full() override;
  std::vector<Deduction> deductions() override;

 protected:
  void push_state() override;
  void pop_state() override;

 private:
  struct Bound {
    DeltaRational value;
    Literal reason;
  };
  struct BoundChange {
    uint32_t var;
    bool upper;
    std::optional<Bound> old;
  };
  struct AtomInfo {
    uint32_t var = 0;  // simplex variable of the atom's linear form
    Rational bound;    // atom is `var rel bound`
    Rel rel = Rel::Le;
    bool registered = false;
  };
  struct Disequality {
    uint32_t var;
    Rational value;
    Literal lit;
  };
  struct Frame {
    size_t bound_trail;
    size_t disequalities;
  };

  uint32_t add_var();
  uint32_t var_for_form(const std::map<TermId, Rational>& form);

  std::optional<std::vector<Literal>> assert_upper(uint32_t v, DeltaRational value, Literal reason);
  std::optional<std::vector<Literal>> assert_lower(uint32_t v, DeltaRational value, Literal reason);
  void set_bound(uint32_t v, bool upper, Bound b);
  void update_nonbasic(uint32_t v, const DeltaRational& value);
  void pivot(uint32_t basic, uint32_t nonbasic);
  /// Simplex feasibility check; returns a conflict on infeasibility.
  std::optional<std::vector<Literal>> make_feasible();
  /// Case split on violated disequalities.
  TheoryVerdict check_disequalities();
  Witness concrete_witness() const;

  bool below_lower(uint32_t v) const { return lower_[v] && value_[v] < lower_[v]->value; }
  bool above_upper(uint32_t v) const { return upper_[v] && value_[v] > upper_[v]->value; }

  std::shared_ptr<const Context> ctx_;
  std::vector<AtomInfo> atom_info_;  // by AtomId
  std::map<TermId, uint32_t> var_of_term_;
  std::map<std::map<TermId, Rational>, uint32_t> var_of_form_;

  // rows_[v] is the defining row of basic variable v over nonbasic variables.
  std::vector<std::optional<std::map<uint32_t, Rational>>> rows_;
  std::vector<DeltaRational> value_;
  std::vector<std::optional<Bound>> lower_;
  std::vector<std::optional<Bound>> upper_;

  std::vector<BoundChange> bound_trail_;
  std::vector<Disequality> disequalities_;
  std::vector<Frame> frames_;
};

/// Congruence closure with a proof forest for explanations. The closure is
/// rebuilt from the asserted literals after a backtrack.
class EufSolver final : public TheorySolver {
 public:
  explicit EufSolver(std::shared_ptr<const Context> ctx);

  TheoryKind kind() const override { return TheoryKind::Euf; }
  std::optional<std::vector<Literal>> assert_literal(Literal lit) override;
  TheoryVerdict check_full() override;
  std::vector<Deduction> deductions() override;

 protected:
  void push_state() override {}
  void pop_state() override { dirty_ = true; }

 private:
  struct Edge {
    bool congruence = false;
    Literal lit;        // !congruence
    TermId a = 0, b = 0;  // congruence between applications a and b
  };

  void reset();
  void rebuild();
  TermId find(TermId t);
  void merge(TermId a, TermId b, Edge why);
  void close_congruences();
  void reroot(TermId t);
  void explain(TermId a, TermId b, std::vector<Literal>& out);
  std::optional<std::vector<Literal>> find_conflict();

  std::shared_ptr<const Context> ctx_;
  std::vector<TermId> apps_;  // non-constant applications
  std::vector<TermId> uf_;
  std::vector<std::optional<TermId>> forest_parent_;
  std::vector<Edge> forest_edge_;
  bool dirty_ = false;
};

}  // namespace lemlift::theory
