// Theory-solver interface, the EUF and LRA implementations, and lemma
// validation.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "lemlift/ir.hpp"

namespace lemlift::theory {

/// Rational paired with an infinitesimal coefficient: `real + delta * eps`.
struct DeltaRational {
  Rational real = 0;
  Rational delta = 0;

  DeltaRational() = default;
  DeltaRational(Rational r, Rational d = 0) : real(std::move(r)), delta(std::move(d)) {}

  DeltaRational operator+(const DeltaRational& o) const { return {real + o.real, delta + o.delta}; }
  DeltaRational operator-(const DeltaRational& o) const { return {real - o.real, delta - o.delta}; }
  DeltaRational operator*(const Rational& k) const { return {real * k, delta * k}; }
  DeltaRational& operator+=(const DeltaRational& o) {
    real += o.real;
    delta += o.delta;
    return *this;
  }
  bool operator==(const DeltaRational& o) const { return real == o.real && delta == o.delta; }
  bool operator<(const DeltaRational& o) const { return real < o.real || (real == o.real && delta < o.delta); }
  bool operator<=(const DeltaRational& o) const { return !(o < *this); }
  bool operator>(const DeltaRational& o) const { return o < *this; }
  bool operator>=(const DeltaRational& o) const { return !(*this < o); }
};

/// Satisfying assignment. LRA fills `reals` (every Real variable of the
/// context); EUF fills `classes` with a class number per uninterpreted term.
struct Witness {
  std::map<TermId, Rational> reals;
  std::map<TermId, uint32_t> classes;
};

struct TheoryVerdict {
  bool sat = true;
  Witness witness;               // sat
  std::vector<Literal> conflict;  // unsat: asserted literals, jointly inconsistent
};

struct Deduction {
  Literal implied;
  std::vector<Literal> explanation;
};

struct Mark {
  uint64_t serial = 0;
};

class TheorySolver {
 public:
  virtual ~TheorySolver() = default;

  virtual TheoryKind kind() const = 0;

  /// Returns the conflict set when the literal makes the asserted set
  /// inconsistent. Throws Error for a literal outside this theory.
  virtual std::optional<std::vector<Literal>> assert_literal(Literal lit) = 0;
  /// Decides the conjunction of all asserted literals.
  virtual TheoryVerdict check_full() = 0;
  /// Literals over unasserted atoms implied by the asserted ones.
  virtual std::vector<Deduction> deductions() = 0;

  Mark mark();
  /// Restores the state at `m` and discards `m` and every later mark. Throws
  /// Error for a mark that is no longer live.
  void backtrack(Mark m);

  const std::vector<Literal>& asserted() const { return asserted_; }
  bool is_asserted(AtomId a) const;

 protected:
  void record_assertion(Literal lit);
  virtual void push_state() = 0;
  virtual void pop_state() = 0;

  std::vector<Literal> asserted_;
  std::vector<uint8_t> asserted_atom_;

 private:
  std::vector<std::pair<uint64_t, size_t>> marks_;  // serial, asserted size
  uint64_t next_serial_ = 1;
};

std::unique_ptr<TheorySolver> make_solver(std::shared_ptr<const Context> ctx, TheoryKind kind);

struct LemmaCheck {
  bool valid = false;
  Witness countermodel;  // when not valid
};

/// Decides theory validity of a clause with a fresh solver. Throws Error on a
/// clause mixing EUF and arithmetic literals.
LemmaCheck is_valid_lemma(std::shared_ptr<const Context> ctx, const Clause& clause);

/// Exact evaluation of an atom under a witness; nullopt for Boolean atoms.
std::optional<bool> evaluate(const Context& ctx, const Witness& w, AtomId atom);

}  // namespace lemlift::theory
