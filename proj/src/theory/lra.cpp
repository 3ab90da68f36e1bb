#include <algorithm>

#include "solvers.hpp"

namespace lemlift::theory {

namespace {

void add_unique(std::vector<Literal>& out, Literal l) {
  if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
}

void sort_unique(std::vector<Literal>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

LraSolver::LraSolver(std::shared_ptr<const Context> ctx) : ctx_(std::move(ctx)) {
  // Every Real variable first, in declaration order, so the witness is total.
  for (TermId t = 0; t < ctx_->num_terms(); ++t) {
    const auto& node = ctx_->term(t);
    if (node.sort.kind == SortKind::Real && node.args.empty()) var_of_term_.emplace(t, add_var());
  }
  const auto& atoms = ctx_->atoms();
  atom_info_.resize(atoms.size());
  for (AtomId a = 0; a < atoms.size(); ++a) {
    const auto* lin = std::get_if<LinearAtom>(&atoms.at(a));
    if (!lin) continue;
    auto& info = atom_info_[a];
    info.var = var_for_form(lin->lhs.coeffs);
    info.bound = -lin->lhs.constant;
    info.rel = lin->rel;
    info.registered = true;
  }
}

uint32_t LraSolver::add_var() {
  auto v = static_cast<uint32_t>(value_.size());
  rows_.emplace_back();
  value_.emplace_back();
  lower_.emplace_back();
  upper_.emplace_back();
  return v;
}

uint32_t LraSolver::var_for_form(const std::map<TermId, Rational>& form) {
  if (form.size() == 1 && form.begin()->second == 1) return var_of_term_.at(form.begin()->first);
  if (auto it = var_of_form_.find(form); it != var_of_form_.end()) return it->second;
  uint32_t s = add_var();
  std::map<uint32_t, Rational> row;
  for (const auto& [t, c] : form) row.emplace(var_of_term_.at(t), c);
  // Original variables are nonbasic until the first pivot, and no pivot has
  // happened during construction.
  rows_[s] = std::move(row);
  var_of_form_.emplace(form, s);
  return s;
}

// ---------------------------------------------------------------------------
// Bounds

void LraSolver::set_bound(uint32_t v, bool upper, Bound b) {
  auto& slot = upper ? upper_[v] : lower_[v];
  bound_trail_.push_back({v, upper, slot});
  slot = std::move(b);
}

void LraSolver::update_nonbasic(uint32_t v, const DeltaRational& value) {
  DeltaRational diff = value - value_[v];
  for (uint32_t b = 0; b < rows_.size(); ++b) {
    if (!rows_[b]) continue;
    auto it = rows_[b]->find(v);
    if (it != rows_[b]->end()) value_[b] += diff * it->second;
  }
  value_[v] = value;
}

std::optional<std::vector<Literal>> LraSolver::assert_upper(uint32_t v, DeltaRational value, Literal reason) {
  if (upper_[v] && upper_[v]->value <= value) return std::nullopt;
  if (lower_[v] && value < lower_[v]->value) {
    std::vector<Literal> conflict{reason};
    add_unique(conflict, lower_[v]->reason);
    return conflict;
  }
  set_bound(v, true, {value, reason});
  if (!rows_[v] && value_[v] > value) update_nonbasic(v, value);
  return std::nullopt;
}

std::optional<std::vector<Literal>> LraSolver::assert_lower(uint32_t v, DeltaRational value, Literal reason) {
  if (lower_[v] && lower_[v]->value >= value) return std::nullopt;
  if (upper_[v] && value > upper_[v]->value) {
    std::vector<Literal> conflict{reason};
    add_unique(conflict, upper_[v]->reason);
    return conflict;
  }
  set_bound(v, false, {value, reason});
  if (!rows_[v] && value_[v] < value) update_nonbasic(v, value);
  return std::nullopt;
}

std::optional<std::vector<Literal>> LraSolver::assert_literal(Literal lit) {
  if (lit.atom >= atom_info_.size() || !atom_info_[lit.atom].registered) {
    throw Error("literal " + ctx_->literal_to_string(lit) + " is not an arithmetic literal");
  }
  record_assertion(lit);
  const auto& info = atom_info_[lit.atom];
  const Rational& k = info.bound;
  switch (info.rel) {
    case Rel::Le:
      return lit.positive ? assert_upper(info.var, {k, 0}, lit) : assert_lower(info.var, {k, 1}, lit);
    case Rel::Lt:
      return lit.positive ? assert_upper(info.var, {k, -1}, lit) : assert_lower(info.var, {k, 0}, lit);
    case Rel::Eq:
      if (lit.positive) {
        if (auto c = assert_upper(info.var, {k, 0}, lit)) return c;
        return assert_lower(info.var, {k, 0}, lit);
      }
      disequalities_.push_back({info.var, k, lit});
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Simplex

void LraSolver::pivot(uint32_t basic, uint32_t nonbasic) {
  auto row = std::move(*rows_[basic]);
  rows_[basic].reset();
  Rational a = row.at(nonbasic);
  row.erase(nonbasic);
  // nonbasic = (1/a) basic - sum (a_k / a) x_k
  std::map<uint32_t, Rational> solved;
  solved.emplace(basic, Rational(1) / a);
  for (const auto& [k, c] : row) solved.emplace(k, -c / a);
  for (uint32_t i = 0; i < rows_.size(); ++i) {
    if (!rows_[i]) continue;
    auto& r = *rows_[i];
    auto it = r.find(nonbasic);
    if (it == r.end()) continue;
    Rational c = it->second;
    r.erase(it);
    for (const auto& [k, d] : solved) {
      auto [jt, inserted] = r.emplace(k, c * d);
      if (!inserted) {
        jt->second += c * d;
        if (jt->second == 0) r.erase(jt);
      }
    }
  }
  rows_[nonbasic] = std::move(solved);
}

std::optional<std::vector<Literal>> LraSolver::make_feasible() {
  for (;;) {
    std::optional<uint32_t> violated;
    for (uint32_t v = 0; v < rows_.size(); ++v) {
      if (rows_[v] && (below_lower(v) || above_upper(v))) {
        violated = v;
        break;
      }
    }
    if (!violated) return std::nullopt;
    uint32_t b = *violated;
    const bool increase = below_lower(b);
    const auto& row = *rows_[b];
    std::optional<uint32_t> entering;
    for (const auto& [j, a] : row) {
      bool can_up = !upper_[j] || value_[j] < upper_[j]->value;
      bool can_down = !lower_[j] || value_[j] > lower_[j]->value;
      bool ok = increase ? ((a > 0 && can_up) || (a < 0 && can_down)) : ((a < 0 && can_up) || (a > 0 && can_down));
      if (ok) {
        entering = j;
        break;
      }
    }
    if (!entering) {
      // Farkas row: the violated bound and the blocking bound of every
      // nonbasic variable in the row.
      std::vector<Literal> conflict{increase ? lower_[b]->reason : upper_[b]->reason};
      for (const auto& [j, a] : row) {
        bool use_upper = increase ? a > 0 : a < 0;
        add_unique(conflict, use_upper ? upper_[j]->reason : lower_[j]->reason);
      }
      sort_unique(conflict);
      return conflict;
    }
    uint32_t j = *entering;
    DeltaRational target = increase ? lower_[b]->value : upper_[b]->value;
    Rational a = row.at(j);
    DeltaRational theta = (target - value_[b]) * (Rational(1) / a);
    value_[j] += theta;
    for (uint32_t i = 0; i < rows_.size(); ++i) {
      if (!rows_[i] || i == b) continue;
      auto it = rows_[i]->find(j);
      if (it != rows_[i]->end()) value_[i] += theta * it->second;
    }
    value_[b] = target;
    pivot(b, j);
  }
}

TheoryVerdict LraSolver::check_disequalities() {
  const Disequality* violated = nullptr;
  for (const auto& d : disequalities_) {
    if (value_[d.var] == DeltaRational(d.value)) {
      violated = &d;
      break;
    }
  }
  TheoryVerdict verdict;
  if (!violated) {
    verdict.witness = concrete_witness();
    return verdict;
  }
  const Disequality d = *violated;
  std::vector<Literal> conflict{d.lit};
  for (int side = 0; side < 2; ++side) {
    push_state();
    auto c = side == 0 ? assert_upper(d.var, {d.value, -1}, d.lit) : assert_lower(d.var, {d.value, 1}, d.lit);
    if (!c) c = make_feasible();
    if (!c) {
      auto inner = check_disequalities();
      if (inner.sat) {
        pop_state();
        return inner;
      }
      c = std::move(inner.conflict);
    }
    for (auto l : *c) add_unique(conflict, l);
    pop_state();
  }
  sort_unique(conflict);
  verdict.sat = false;
  verdict.conflict = std::move(conflict);
  return verdict;
}

TheoryVerdict LraSolver::check_full() {
  if (auto c = make_feasible()) {
    TheoryVerdict v;
    v.sat = false;
    v.conflict = std::move(*c);
    return v;
  }
  return check_disequalities();
}

Witness LraSolver::concrete_witness() const {
  // Largest eps in (0, 1] keeping every bound, then shrunk until no
  // disequality collides.
  Rational eps = 1;
  auto limit = [&](const DeltaRational& lo, const DeltaRational& hi) {
    if (lo.real < hi.real && lo.delta > hi.delta) {
      Rational bound = (hi.real - lo.real) / (lo.delta - hi.delta);
      if (bound < eps) eps = bound;
    }
  };
  for (uint32_t v = 0; v < value_.size(); ++v) {
    if (lower_[v]) limit(lower_[v]->value, value_[v]);
    if (upper_[v]) limit(value_[v], upper_[v]->value);
  }
  auto collides = [&]() {
    for (const auto& d : disequalities_) {
      const auto& x = value_[d.var];
      if (x.real + x.delta * eps == d.value) return true;
    }
    return false;
  };
  while (collides()) eps /= 2;
  Witness w;
  for (const auto& [t, v] : var_of_term_) w.reals.emplace(t, value_[v].real + value_[v].delta * eps);
  return w;
}

// ---------------------------------------------------------------------------
// Propagation

std::vector<Deduction> LraSolver::deductions() {
  std::vector<Deduction> out;
  for (AtomId a = 0; a < atom_info_.size(); ++a) {
    const auto& info = atom_info_[a];
    if (!info.registered || is_asserted(a)) continue;
    const auto& lo = lower_[info.var];
    const auto& hi = upper_[info.var];
    if (!lo && !hi) continue;
    DeltaRational k(info.bound);
    auto emit = [&](bool positive, std::vector<Literal> why) {
      sort_unique(why);
      out.push_back({Literal{a, positive}, std::move(why)});
    };
    switch (info.rel) {
      case Rel::Le:
        if (hi && hi->value <= k) {
          emit(true, {hi->reason});
        } else if (lo && lo->value > k) {
          emit(false, {lo->reason});
        }
        break;
      case Rel::Lt:
        if (hi && hi->value < k) {
          emit(true, {hi->reason});
        } else if (lo && lo->value >= k) {
          emit(false, {lo->reason});
        }
        break;
      case Rel::Eq:
        if (hi && hi->value < k) {
          emit(false, {hi->reason});
        } else if (lo && lo->value > k) {
          emit(false, {lo->reason});
        } else if (lo && hi && lo->value == k && hi->value == k) {
          emit(true, {lo->reason, hi->reason});
        }
        break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Backtracking

void LraSolver::push_state() { frames_.push_back({bound_trail_.size(), disequalities_.size()}); }

void LraSolver::pop_state() {
  const Frame f = frames_.back();
  frames_.pop_back();
  while (bound_trail_.size() > f.bound_trail) {
    auto& change = bound_trail_.back();
    (change.upper ? upper_ : lower_)[change.var] = std::move(change.old);
    bound_trail_.pop_back();
  }
  disequalities_.resize(f.disequalities);
}

}  // namespace lemlift::theory
