// Terms, atoms, literals, clauses and the Boolean abstraction table.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace lemlift {

using Rational = mpq_class;

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_string(const Rational& q);

// ---------------------------------------------------------------------------
// Sorts and terms
// ---------------------------------------------------------------------------

enum class SortKind : uint8_t { Bool, Real, Uninterpreted };

struct Sort {
  SortKind kind = SortKind::Bool;
  std::string name;  // only for uninterpreted sorts

  static Sort boolean() { return {SortKind::Bool, {}}; }
  static Sort real() { return {SortKind::Real, {}}; }
  static Sort uninterpreted(std::string n) { return {SortKind::Uninterpreted, std::move(n)}; }

  bool operator==(const Sort&) const = default;
};

std::string to_string(const Sort& s);

using SymbolId = uint32_t;
using TermId = uint32_t;

struct FunctionSymbol {
  std::string name;
  std::vector<Sort> args;
  Sort result;
};

/// Hash-consed application node. A zero-ary application of a Real symbol is a
/// theory variable; a zero-ary application of an uninterpreted sort is a
/// constant.
struct TermNode {
  SymbolId symbol = 0;
  std::vector<TermId> args;
  Sort sort;
};

/// Sum of coeff * variable plus a constant offset. Zero coefficients are never
/// stored. Keys are TermIds, which follow declaration order.
struct LinearExpr {
  std::map<TermId, Rational> coeffs;
  Rational constant = 0;

  static LinearExpr variable(TermId v);
  static LinearExpr constant_of(Rational c);

  LinearExpr& operator+=(const LinearExpr& o);
  LinearExpr& operator-=(const LinearExpr& o);
  LinearExpr& operator*=(const Rational& k);
  bool is_constant() const { return coeffs.empty(); }
  bool operator==(const LinearExpr& o) const;
};

// ---------------------------------------------------------------------------
// Atoms and literals
// ---------------------------------------------------------------------------

enum class Rel : uint8_t { Le, Lt, Eq };
enum class RelOp : uint8_t { Le, Lt, Eq, Ge, Gt };

struct BoolAtom {
  std::string name;
};

/// `lhs rel 0`, canonical: integer coefficients with gcd 1, first coefficient
/// positive.
struct LinearAtom {
  LinearExpr lhs;
  Rel rel = Rel::Le;
};

/// Equality between two terms of the same uninterpreted sort; lhs < rhs.
struct EqAtom {
  TermId lhs = 0;
  TermId rhs = 0;
};

using Atom = std::variant<BoolAtom, LinearAtom, EqAtom>;
using AtomId = uint32_t;

enum class TheoryKind : uint8_t { None, Euf, Lra };

TheoryKind theory_of(const Atom& a);

struct Literal {
  AtomId atom = 0;
  bool positive = true;

  Literal operator~() const { return {atom, !positive}; }
  auto operator<=>(const Literal&) const = default;
};

/// Append-only bijection between atoms and Boolean variables. Atom id `a` is
/// Boolean variable `a + 1` in DIMACS numbering.
class AtomTable {
 public:
  /// Returns the id of `atom`, interning it if new. `atom` must already be in
  /// canonical form.
  AtomId intern(const Atom& atom);
  std::optional<AtomId> find(const Atom& atom) const;

  const Atom& at(AtomId id) const;
  size_t size() const { return atoms_.size(); }
  std::span<const Atom> atoms() const { return atoms_; }

 private:
  std::vector<Atom> atoms_;
  std::unordered_map<std::string, AtomId> index_;
};

// ---------------------------------------------------------------------------
// Clauses and formulas
// ---------------------------------------------------------------------------

struct Origin {
  enum class Kind : uint8_t { Original, TLemma, Learned };
  Kind kind = Kind::Original;
  uint32_t index = 0;      // input index or lemma index
  uint32_t assertion = 0;  // source assertion id, Original only

  static Origin original(uint32_t idx, uint32_t assertion_id) { return {Kind::Original, idx, assertion_id}; }
  static Origin lemma(uint32_t idx) { return {Kind::TLemma, idx, 0}; }
  static Origin learned() { return {Kind::Learned, 0, 0}; }
};

struct Clause {
  std::vector<Literal> lits;
  Origin origin;

  /// Removes duplicate literals; throws Error on a tautology.
  static Clause make(std::vector<Literal> lits, Origin origin);
};

enum class Logic : uint8_t { Propositional, Euf, Lra };

std::string to_string(Logic l);

/// Symbols, terms and atoms of one problem. Mutable while a problem is being
/// built, then shared read-only through Formula.
class Context {
 public:
  static constexpr const char* kPredicateSort = "Bool!";

  Context();

  // Declarations
  void declare_sort(const std::string& name);
  bool has_sort(const std::string& name) const;
  SymbolId declare_fun(const std::string& name, std::vector<Sort> args, Sort result);
  std::optional<SymbolId> find_symbol(const std::string& name) const;
  const FunctionSymbol& symbol(SymbolId id) const { return symbols_.at(id); }
  size_t num_symbols() const { return symbols_.size(); }

  /// Convenience: declares a zero-ary Real symbol and returns its term.
  TermId real_var(const std::string& name);
  /// Convenience: declares a zero-ary constant of `sort` and returns its term.
  TermId constant(const std::string& name, const Sort& sort);

  // Terms
  TermId app(SymbolId f, std::vector<TermId> args);
  const TermNode& term(TermId t) const { return terms_.at(t); }
  size_t num_terms() const { return terms_.size(); }
  std::string term_name(TermId t) const;

  // Literals. The `mk_*` functions return a literal, or a Boolean constant
  // when the atom folds away (e.g. `1 <= 2`, `a = a`).
  using LitOrConst = std::variant<Literal, bool>;
  LitOrConst mk_linear(const LinearExpr& lhs, RelOp op, const LinearExpr& rhs);
  LitOrConst mk_eq(TermId a, TermId b);
  /// Predicate application p(t...) for a Bool-valued uninterpreted function.
  Literal mk_predicate(TermId app_term);
  Literal mk_bool(const std::string& name);

  AtomTable& atoms() { return atoms_; }
  const AtomTable& atoms() const { return atoms_; }

  std::string atom_to_string(AtomId a) const;
  std::string literal_to_string(Literal l) const;

 private:
  std::vector<FunctionSymbol> symbols_;
  std::unordered_map<std::string, SymbolId> symbol_index_;
  std::vector<std::string> sorts_;
  std::vector<TermNode> terms_;
  std::map<std::pair<SymbolId, std::vector<TermId>>, TermId> term_index_;
  AtomTable atoms_;
  std::optional<TermId> true_term_;
};

class Formula {
 public:
  Formula() = default;
  Formula(std::shared_ptr<const Context> ctx, std::vector<Clause> clauses, uint32_t num_assertions = 0);

  const Context& context() const { return *ctx_; }
  std::shared_ptr<const Context> context_ptr() const { return ctx_; }
  std::span<const Clause> clauses() const { return clauses_; }
  const Clause& clause(size_t i) const { return clauses_.at(i); }
  size_t size() const { return clauses_.size(); }
  Logic logic() const { return logic_; }
  uint32_t num_assertions() const { return num_assertions_; }

  /// The clauses at `indices`, renumbered 0..k-1 in the given order, sharing
  /// the same context. Assertion ids are kept.
  Formula subset(std::span<const uint32_t> indices) const;

 private:
  std::shared_ptr<const Context> ctx_;
  std::vector<Clause> clauses_;
  Logic logic_ = Logic::Propositional;
  uint32_t num_assertions_ = 0;
};

/// Logic implied by the atoms a set of clauses uses. Throws when both EUF and
/// arithmetic atoms occur.
Logic infer_logic(const Context& ctx, std::span<const Clause> clauses);

}  // namespace lemlift
