#include <algorithm>
#include <map>

#include "lemlift/frontend.hpp"

namespace lemlift::frontend {

namespace {

using Kind = Expr::Kind;
using Lits = std::vector<Literal>;
using Cnf = std::vector<Lits>;

ExprPtr node(Kind k, std::vector<ExprPtr> kids = {}) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->kids = std::move(kids);
  return e;
}

ExprPtr lit_node(Literal l) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Lit;
  e->lit = l;
  return e;
}

/// Flattened and constant-folded conjunction or disjunction.
ExprPtr junction(Kind k, const std::vector<ExprPtr>& kids) {
  const Kind unit = k == Kind::And ? Kind::True : Kind::False;
  const Kind zero = k == Kind::And ? Kind::False : Kind::True;
  std::vector<ExprPtr> flat;
  for (const auto& kid : kids) {
    if (kid->kind == zero) return node(zero);
    if (kid->kind == unit) continue;
    if (kid->kind == k) {
      flat.insert(flat.end(), kid->kids.begin(), kid->kids.end());
    } else {
      flat.push_back(kid);
    }
  }
  if (flat.empty()) return node(unit);
  if (flat.size() == 1) return flat[0];
  return node(k, std::move(flat));
}

/// Negation normal form over Lit/True/False/And/Or.
ExprPtr nnf(const ExprPtr& e, bool positive) {
  switch (e->kind) {
    case Kind::Lit:
      return lit_node(positive ? e->lit : ~e->lit);
    case Kind::True:
      return node(positive ? Kind::True : Kind::False);
    case Kind::False:
      return node(positive ? Kind::False : Kind::True);
    case Kind::Not:
      return nnf(e->kids[0], !positive);
    case Kind::And:
    case Kind::Or: {
      std::vector<ExprPtr> kids;
      for (const auto& k : e->kids) kids.push_back(nnf(k, positive));
      bool conj = (e->kind == Kind::And) == positive;
      return junction(conj ? Kind::And : Kind::Or, kids);
    }
    case Kind::Iff: {
      const auto& a = e->kids[0];
      const auto& b = e->kids[1];
      auto left = junction(Kind::Or, {nnf(a, false), nnf(b, positive)});
      auto right = junction(Kind::Or, {nnf(a, true), nnf(b, !positive)});
      return junction(Kind::And, {left, right});
    }
    case Kind::Ite: {
      const auto& c = e->kids[0];
      auto then_part = junction(Kind::Or, {nnf(c, false), nnf(e->kids[1], positive)});
      auto else_part = junction(Kind::Or, {nnf(c, true), nnf(e->kids[2], positive)});
      return junction(Kind::And, {then_part, else_part});
    }
  }
  return e;
}

/// Joins two clauses; nullopt for a tautology.
std::optional<Lits> join(const Lits& a, const Lits& b) {
  Lits out = a;
  for (auto l : b) {
    if (std::find(out.begin(), out.end(), ~l) != out.end()) return std::nullopt;
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  }
  return out;
}

/// Plain distribution; nullopt once more than `cap` clauses would be needed.
std::optional<Cnf> distribute(const ExprPtr& e, size_t cap) {
  switch (e->kind) {
    case Kind::Lit:
      return Cnf{{e->lit}};
    case Kind::True:
      return Cnf{};
    case Kind::False:
      return Cnf{Lits{}};
    case Kind::And: {
      Cnf out;
      for (const auto& k : e->kids) {
        auto sub = distribute(k, cap);
        if (!sub) return std::nullopt;
        out.insert(out.end(), sub->begin(), sub->end());
        if (out.size() > cap) return std::nullopt;
      }
      return out;
    }
    case Kind::Or: {
      Cnf acc{Lits{}};
      for (const auto& k : e->kids) {
        auto sub = distribute(k, cap);
        if (!sub) return std::nullopt;
        Cnf next;
        for (const auto& x : acc) {
          for (const auto& y : *sub) {
            if (auto j = join(x, y)) next.push_back(std::move(*j));
            if (next.size() > cap) return std::nullopt;
          }
        }
        acc = std::move(next);
      }
      return acc;
    }
    default:
      break;
  }
  throw Error("internal: expression not in negation normal form");
}

class Definitional {
 public:
  Definitional(Context& ctx, Cnf& out) : ctx_(ctx), out_(out) {}

  void top(const ExprPtr& e) {
    switch (e->kind) {
      case Kind::True:
        return;
      case Kind::False:
        out_.push_back({});
        return;
      case Kind::Lit:
        out_.push_back({e->lit});
        return;
      case Kind::And:
        for (const auto& k : e->kids) top(k);
        return;
      case Kind::Or: {
        Lits clause;
        for (const auto& k : e->kids) clause.push_back(literal(k));
        out_.push_back(std::move(clause));
        return;
      }
      default:
        throw Error("internal: expression not in negation normal form");
    }
  }

 private:
  Literal literal(const ExprPtr& e) {
    if (e->kind == Kind::Lit) return e->lit;
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
    Literal t = fresh();
    std::vector<Literal> kids;
    for (const auto& k : e->kids) kids.push_back(literal(k));
    if (e->kind == Kind::And) {
      // t <-> k1 & ... & kn
      Lits back{t};
      for (auto k : kids) {
        out_.push_back({~t, k});
        back.push_back(~k);
      }
      out_.push_back(std::move(back));
    } else {
      // t <-> k1 | ... | kn
      Lits fwd{~t};
      for (auto k : kids) {
        out_.push_back({t, ~k});
        fwd.push_back(k);
      }
      out_.push_back(std::move(fwd));
    }
    memo_.emplace(e.get(), t);
    return t;
  }

  Literal fresh() {
    for (;;) {
      std::string name = "!k" + std::to_string(ctx_.atoms().size());
      if (!ctx_.atoms().find(BoolAtom{name})) return ctx_.mk_bool(name);
    }
  }

  Context& ctx_;
  Cnf& out_;
  std::map<const Expr*, Literal> memo_;
};

}  // namespace

Formula cnf_convert(const AssertionSet& set, CnfOptions options) {
  std::vector<Clause> clauses;
  for (const auto& a : set.assertions) {
    ExprPtr e = nnf(a.expr, true);
    std::optional<Cnf> cnf;
    if (!options.force_definitional) cnf = distribute(e, options.max_distributed);
    if (!cnf) {
      cnf.emplace();
      Definitional(*set.ctx, *cnf).top(e);
    }
    for (auto& lits : *cnf) {
      bool taut = false;
      for (auto l : lits) taut = taut || std::find(lits.begin(), lits.end(), ~l) != lits.end();
      if (taut) continue;
      auto i = static_cast<uint32_t>(clauses.size());
      clauses.push_back(Clause::make(std::move(lits), Origin::original(i, a.id)));
    }
  }
  return Formula(set.ctx, std::move(clauses), static_cast<uint32_t>(set.assertions.size()));
}

}  // namespace lemlift::frontend
