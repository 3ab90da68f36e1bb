#include "lemlift/ir.hpp"

#include <algorithm>
#include <sstream>

#include "lemlift/boolean.hpp"

namespace lemlift {

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const Sort& s) {
  switch (s.kind) {
    case SortKind::Bool:
      return "Bool";
    case SortKind::Real:
      return "Real";
    case SortKind::Uninterpreted:
      return s.name;
  }
  return "?";
}

std::string to_string(Logic l) {
  switch (l) {
    case Logic::Propositional:
      return "propositional";
    case Logic::Euf:
      return "EUF";
    case Logic::Lra:
      return "LRA";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// LinearExpr

LinearExpr LinearExpr::variable(TermId v) {
  LinearExpr e;
  e.coeffs.emplace(v, Rational(1));
  return e;
}

LinearExpr LinearExpr::constant_of(Rational c) {
  LinearExpr e;
  e.constant = std::move(c);
  return e;
}

LinearExpr& LinearExpr::operator+=(const LinearExpr& o) {
  for (const auto& [v, c] : o.coeffs) {
    auto [it, inserted] = coeffs.emplace(v, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) coeffs.erase(it);
    }
  }
  constant += o.constant;
  return *this;
}

LinearExpr& LinearExpr::operator-=(const LinearExpr& o) {
  LinearExpr neg = o;
  neg *= Rational(-1);
  return *this += neg;
}

LinearExpr& LinearExpr::operator*=(const Rational& k) {
  if (k == 0) {
    coeffs.clear();
    constant = 0;
    return *this;
  }
  for (auto& [v, c] : coeffs) c *= k;
  constant *= k;
  return *this;
}

bool LinearExpr::operator==(const LinearExpr& o) const { return constant == o.constant && coeffs == o.coeffs; }

// ---------------------------------------------------------------------------
// Atoms

TheoryKind theory_of(const Atom& a) {
  if (std::holds_alternative<LinearAtom>(a)) return TheoryKind::Lra;
  if (std::holds_alternative<EqAtom>(a)) return TheoryKind::Euf;
  return TheoryKind::None;
}

namespace {

std::string atom_key(const Atom& a) {
  std::ostringstream os;
  if (const auto* b = std::get_if<BoolAtom>(&a)) {
    os << "B:" << b->name;
  } else if (const auto* l = std::get_if<LinearAtom>(&a)) {
    os << "L" << static_cast<int>(l->rel) << ':';
    for (const auto& [v, c] : l->lhs.coeffs) os << v << '*' << c.get_str() << ',';
    os << l->lhs.constant.get_str();
  } else {
    const auto& e = std::get<EqAtom>(a);
    os << "E:" << e.lhs << '=' << e.rhs;
  }
  return os.str();
}

}  // namespace

AtomId AtomTable::intern(const Atom& atom) {
  auto key = atom_key(atom);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  auto id = static_cast<AtomId>(atoms_.size());
  atoms_.push_back(atom);
  index_.emplace(std::move(key), id);
  return id;
}

std::optional<AtomId> AtomTable::find(const Atom& atom) const {
  if (auto it = index_.find(atom_key(atom)); it != index_.end()) return it->second;
  return std::nullopt;
}

const Atom& AtomTable::at(AtomId id) const {
  if (id >= atoms_.size()) throw Error("atom id " + std::to_string(id) + " is not in the atom table");
  return atoms_[id];
}

// ---------------------------------------------------------------------------
// Clauses

Clause Clause::make(std::vector<Literal> lits, Origin origin) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (size_t i = 1; i < lits.size(); ++i) {
    if (lits[i].atom == lits[i - 1].atom) throw Error("tautological clause: contains a literal and its negation");
  }
  return Clause{std::move(lits), origin};
}

// ---------------------------------------------------------------------------
// Context

Context::Context() = default;

void Context::declare_sort(const std::string& name) {
  if (name == "Bool" || name == "Real" || name == "Int" || has_sort(name)) throw Error("sort already declared: " + name);
  sorts_.push_back(name);
}

bool Context::has_sort(const std::string& name) const {
  return std::find(sorts_.begin(), sorts_.end(), name) != sorts_.end();
}

SymbolId Context::declare_fun(const std::string& name, std::vector<Sort> args, Sort result) {
  if (symbol_index_.count(name)) throw Error("symbol already declared: " + name);
  for (const auto& s : args) {
    if (s.kind == SortKind::Uninterpreted && !has_sort(s.name)) throw Error("unknown sort: " + s.name);
  }
  if (result.kind == SortKind::Uninterpreted && !has_sort(result.name)) throw Error("unknown sort: " + result.name);
  if (!args.empty()) {
    if (result.kind == SortKind::Real) throw Error("uninterpreted functions into Real are not supported: " + name);
    for (const auto& s : args) {
      if (s.kind != SortKind::Uninterpreted) {
        throw Error("function arguments must have an uninterpreted sort: " + name);
      }
    }
  }
  if (!args.empty() && result.kind == SortKind::Bool && !true_term_) {
    // Predicate applications are terms of a pseudo-sort, compared against a
    // distinguished constant.
    sorts_.push_back(kPredicateSort);
    auto sym = static_cast<SymbolId>(symbols_.size());
    symbols_.push_back({"true!", {}, Sort::uninterpreted(kPredicateSort)});
    symbol_index_.emplace("true!", sym);
    true_term_ = app(sym, {});
  }
  auto id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back({name, std::move(args), std::move(result)});
  symbol_index_.emplace(name, id);
  // Zero-ary non-Boolean symbols get their term immediately so that TermId
  // order follows declaration order.
  if (symbols_.back().args.empty() && symbols_.back().result.kind != SortKind::Bool) app(id, {});
  return id;
}

std::optional<SymbolId> Context::find_symbol(const std::string& name) const {
  if (auto it = symbol_index_.find(name); it != symbol_index_.end()) return it->second;
  return std::nullopt;
}

TermId Context::real_var(const std::string& name) { return app(declare_fun(name, {}, Sort::real()), {}); }

TermId Context::constant(const std::string& name, const Sort& sort) {
  if (sort.kind == SortKind::Uninterpreted && !has_sort(sort.name)) declare_sort(sort.name);
  return app(declare_fun(name, {}, sort), {});
}

TermId Context::app(SymbolId f, std::vector<TermId> args) {
  const auto& sym = symbols_.at(f);
  if (sym.args.size() != args.size()) {
    throw Error("arity mismatch for " + sym.name + ": expected " + std::to_string(sym.args.size()) + ", got " +
                std::to_string(args.size()));
  }
  for (size_t i = 0; i < args.size(); ++i) {
    if (!(terms_.at(args[i]).sort == sym.args[i])) {
      throw Error("sort mismatch in argument " + std::to_string(i + 1) + " of " + sym.name);
    }
  }
  auto key = std::make_pair(f, args);
  if (auto it = term_index_.find(key); it != term_index_.end()) return it->second;
  auto id = static_cast<TermId>(terms_.size());
  Sort sort = sym.result;
  if (!args.empty() && sort.kind == SortKind::Bool) sort = Sort::uninterpreted(kPredicateSort);
  terms_.push_back({f, std::move(args), std::move(sort)});
  term_index_.emplace(std::move(key), id);
  return id;
}

std::string Context::term_name(TermId t) const {
  const auto& node = terms_.at(t);
  const auto& name = symbols_.at(node.symbol).name;
  if (node.args.empty()) return name;
  std::string out = "(" + name;
  for (auto a : node.args) out += " " + term_name(a);
  return out + ")";
}

namespace {

mpz_class abs_gcd(const mpz_class& a, const mpz_class& b) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

mpz_class lcm_of(const mpz_class& a, const mpz_class& b) {
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

bool holds(const Rational& c, Rel rel) {
  switch (rel) {
    case Rel::Le:
      return c <= 0;
    case Rel::Lt:
      return c < 0;
    case Rel::Eq:
      return c == 0;
  }
  return false;
}

}  // namespace

Context::LitOrConst Context::mk_linear(const LinearExpr& lhs, RelOp op, const LinearExpr& rhs) {
  LinearExpr e = lhs;
  e -= rhs;
  Rel rel = Rel::Le;
  switch (op) {
    case RelOp::Le:
      rel = Rel::Le;
      break;
    case RelOp::Lt:
      rel = Rel::Lt;
      break;
    case RelOp::Eq:
      rel = Rel::Eq;
      break;
    case RelOp::Ge:
      e *= Rational(-1);
      rel = Rel::Le;
      break;
    case RelOp::Gt:
      e *= Rational(-1);
      rel = Rel::Lt;
      break;
  }
  for (const auto& [v, c] : e.coeffs) {
    if (terms_.at(v).sort.kind != SortKind::Real || !terms_.at(v).args.empty()) {
      throw Error("linear atom over a non-Real term: " + term_name(v));
    }
  }
  if (e.is_constant()) return holds(e.constant, rel);

  // Clear denominators, then divide by the gcd of all numerators.
  mpz_class den = e.constant.get_den();
  for (const auto& [v, c] : e.coeffs) den = lcm_of(den, c.get_den());
  e *= Rational(den);
  mpz_class g = e.constant.get_num();
  for (const auto& [v, c] : e.coeffs) g = abs_gcd(g, c.get_num());
  e *= Rational(mpz_class(1), g);

  bool positive = true;
  if (e.coeffs.begin()->second < 0) {
    e *= Rational(-1);
    // -f <= 0 is not(f < 0); -f < 0 is not(f <= 0).
    if (rel == Rel::Le) {
      rel = Rel::Lt;
      positive = false;
    } else if (rel == Rel::Lt) {
      rel = Rel::Le;
      positive = false;
    }
  }
  return Literal{atoms_.intern(LinearAtom{std::move(e), rel}), positive};
}

Context::LitOrConst Context::mk_eq(TermId a, TermId b) {
  const auto& sa = terms_.at(a).sort;
  const auto& sb = terms_.at(b).sort;
  if (!(sa == sb)) throw Error("sort mismatch in equality: " + to_string(sa) + " vs " + to_string(sb));
  if (sa.kind == SortKind::Real) return mk_linear(LinearExpr::variable(a), RelOp::Eq, LinearExpr::variable(b));
  if (sa.kind == SortKind::Bool) throw Error("Boolean equality is a connective, not an atom");
  if (a == b) return true;
  if (b < a) std::swap(a, b);
  return Literal{atoms_.intern(EqAtom{a, b}), true};
}

Literal Context::mk_predicate(TermId app_term) {
  const auto& node = terms_.at(app_term);
  if (node.args.empty() || !(node.sort == Sort::uninterpreted(kPredicateSort))) throw Error("not a predicate application");
  TermId a = app_term;
  TermId b = *true_term_;
  if (b < a) std::swap(a, b);
  return Literal{atoms_.intern(EqAtom{a, b}), true};
}

Literal Context::mk_bool(const std::string& name) { return Literal{atoms_.intern(BoolAtom{name}), true}; }

std::string Context::atom_to_string(AtomId id) const {
  const auto& a = atoms_.at(id);
  if (const auto* b = std::get_if<BoolAtom>(&a)) return b->name;
  if (const auto* e = std::get_if<EqAtom>(&a)) return "(= " + term_name(e->lhs) + " " + term_name(e->rhs) + ")";
  const auto& l = std::get<LinearAtom>(a);
  std::string lhs;
  size_t n = 0;
  for (const auto& [v, c] : l.lhs.coeffs) {
    std::string name = term_name(v);
    lhs += (c == 1 ? name : "(* " + c.get_str() + " " + name + ")") + " ";
    ++n;
  }
  if (l.lhs.constant != 0) {
    lhs += l.lhs.constant.get_str() + " ";
    ++n;
  }
  lhs.pop_back();
  if (n > 1) lhs = "(+ " + lhs + ")";
  const char* rel = l.rel == Rel::Le ? "<=" : l.rel == Rel::Lt ? "<" : "=";
  return std::string("(") + rel + " " + lhs + " 0)";
}

std::string Context::literal_to_string(Literal l) const {
  auto a = atom_to_string(l.atom);
  return l.positive ? a : "(not " + a + ")";
}

// ---------------------------------------------------------------------------
// Formula

Logic infer_logic(const Context& ctx, std::span<const Clause> clauses) {
  bool euf = false;
  bool lra = false;
  for (const auto& c : clauses) {
    for (auto l : c.lits) {
      switch (theory_of(ctx.atoms().at(l.atom))) {
        case TheoryKind::Euf:
          euf = true;
          break;
        case TheoryKind::Lra:
          lra = true;
          break;
        case TheoryKind::None:
          break;
      }
    }
  }
  if (euf && lra) throw Error("formula mixes EUF and arithmetic atoms; theory combination is not supported");
  return euf ? Logic::Euf : lra ? Logic::Lra : Logic::Propositional;
}

Formula::Formula(std::shared_ptr<const Context> ctx, std::vector<Clause> clauses, uint32_t num_assertions)
    : ctx_(std::move(ctx)), clauses_(std::move(clauses)), num_assertions_(num_assertions) {
  for (size_t i = 0; i < clauses_.size(); ++i) {
    auto& c = clauses_[i];
    if (c.origin.kind != Origin::Kind::Original) throw Error("formula clauses must have Original origin");
    c.origin.index = static_cast<uint32_t>(i);
    for (auto l : c.lits) (void)ctx_->atoms().at(l.atom);
    num_assertions_ = std::max(num_assertions_, c.origin.assertion + 1);
  }
  logic_ = infer_logic(*ctx_, clauses_);
}

Formula Formula::subset(std::span<const uint32_t> indices) const {
  std::vector<Clause> out;
  out.reserve(indices.size());
  for (auto i : indices) {
    if (i >= clauses_.size()) throw Error("clause index out of range: " + std::to_string(i));
    out.push_back(clauses_[i]);
  }
  return Formula(ctx_, std::move(out), num_assertions_);
}

// ---------------------------------------------------------------------------
// Abstraction

namespace sat {

BoolClause normalized(BoolClause c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

bool is_tautology(const BoolClause& c) {
  for (size_t i = 1; i < c.size(); ++i) {
    if (c[i].var() == c[i - 1].var()) return true;
  }
  return false;
}

std::string to_string(const BoolClause& c) {
  std::string out = "(";
  for (size_t i = 0; i < c.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(c[i].to_dimacs());
  }
  return out + ")";
}

}  // namespace sat

sat::Lit t2p(Literal l) { return sat::Lit::make(l.atom, !l.positive); }

sat::BoolClause t2p(const Clause& c) {
  sat::BoolClause out;
  out.reserve(c.lits.size());
  for (auto l : c.lits) out.push_back(t2p(l));
  return out;
}

Literal p2t(sat::Lit l, const AtomTable& table) {
  if (l.var() >= table.size()) {
    throw Error("Boolean variable " + std::to_string(l.var() + 1) + " has no atom (table size " +
                std::to_string(table.size()) + ")");
  }
  return Literal{l.var(), !l.negative()};
}

Clause p2t(const sat::BoolClause& c, const AtomTable& table, Origin origin) {
  Clause out;
  out.origin = origin;
  out.lits.reserve(c.size());
  for (auto l : c) out.lits.push_back(p2t(l, table));
  return out;
}

}  // namespace lemlift
