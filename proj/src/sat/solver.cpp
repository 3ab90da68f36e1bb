#include <algorithm>
#include <cassert>
#include <map>

#include "lemlift/sat.hpp"

namespace lemlift::sat {

SatSolver::SatSolver(SatOptions options)
    : options_(options), restarts_enabled_(options.restarts.value_or(!options.log_proof)), rng_(options.seed) {}

Var SatSolver::new_var() {
  auto v = static_cast<Var>(assigns_.size());
  assigns_.push_back(Value::Undef);
  levels_.push_back(0);
  reasons_.push_back(kNoReason);
  phase_.push_back(false);
  activity_.push_back(0.0);
  heap_pos_.push_back(-1);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v;
}

void SatSolver::ensure_vars(size_t n) {
  while (num_vars() < n) new_var();
}

Value SatSolver::value(Lit l) const {
  Value a = assigns_[l.var()];
  if (a == Value::Undef) return a;
  return ((a == Value::True) != l.negative()) ? Value::True : Value::False;
}

std::vector<BoolClause> SatSolver::clause_database() const {
  std::vector<BoolClause> out;
  out.reserve(clauses_.size());
  for (const auto& c : clauses_) out.push_back(normalized(c.lits));
  return out;
}

// ---------------------------------------------------------------------------
// Clause storage and watching

ClauseId SatSolver::store_clause(BoolClause lits, uint64_t tag, bool learned, ProofNodeId proof) {
  ClauseData c;
  c.lits = std::move(lits);
  c.tag = tag;
  c.learned = learned;
  c.proof = proof;
  auto id = static_cast<ClauseId>(clauses_.size());
  if (!learned) input_index_.emplace(normalized(c.lits), id);
  clauses_.push_back(std::move(c));
  return id;
}

void SatSolver::order_for_watching(BoolClause& lits) const {
  // Non-false literals first, then false literals by decreasing level.
  auto rank = [&](Lit l) -> int64_t {
    Value v = value(l);
    if (v == Value::True) return -2;
    if (v == Value::Undef) return -1;
    return -static_cast<int64_t>(level(l.var())) - 3;
  };
  std::stable_sort(lits.begin(), lits.end(), [&](Lit a, Lit b) { return rank(a) > rank(b); });
}

void SatSolver::attach(ClauseId id) {
  auto& c = clauses_[id];
  if (c.attached || c.lits.size() < 2) return;
  order_for_watching(c.lits);
  watches_[c.lits[0].x].push_back(id);
  watches_[c.lits[1].x].push_back(id);
  c.attached = true;
}

ClauseId SatSolver::add_clause(std::span<const Lit> lits, uint64_t tag) {
  cancel_until(0);
  BoolClause c = normalized(BoolClause(lits.begin(), lits.end()));
  if (!c.empty()) ensure_vars(c.back().var() + 1);
  ProofNodeId node = 0;
  auto id = static_cast<ClauseId>(clauses_.size());
  if (options_.log_proof) node = proof_.add_leaf(id, c);
  store_clause(c, tag, false, node);
  if (is_tautology(c) || inconsistent_) return id;
  if (c.empty()) {
    inconsistent_ = true;
    if (options_.log_proof) proof_.set_final(node);
    return id;
  }
  if (c.size() == 1) {
    if (value(c[0]) == Value::False) {
      derive_empty(id);
    } else if (value(c[0]) == Value::Undef) {
      enqueue(c[0], id);
    }
    return id;
  }
  attach(id);
  const auto& w = clauses_[id].lits;
  if (value(w[0]) == Value::False) {
    derive_empty(id);
  } else if (value(w[0]) == Value::Undef && value(w[1]) == Value::False) {
    enqueue(w[0], id);
  }
  return id;
}

// ---------------------------------------------------------------------------
// Assignment

void SatSolver::enqueue(Lit l, ClauseId reason) {
  assigns_[l.var()] = l.negative() ? Value::False : Value::True;
  levels_[l.var()] = decision_level();
  reasons_[l.var()] = reason;
  trail_.push_back(l);
}

void SatSolver::new_decision_level() { trail_lim_.push_back(trail_.size()); }

void SatSolver::cancel_until(uint32_t lvl) {
  if (decision_level() <= lvl) return;
  for (size_t i = trail_.size(); i-- > trail_lim_[lvl];) {
    Var v = trail_[i].var();
    phase_[v] = !trail_[i].negative();
    assigns_[v] = Value::Undef;
    reasons_[v] = kNoReason;
    heap_insert(v);
  }
  trail_.resize(trail_lim_[lvl]);
  trail_lim_.resize(lvl);
  qhead_ = std::min(qhead_, trail_.size());
  if (theory_) theory_->backjump(lvl);
}

std::optional<ClauseId> SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    Lit false_lit = ~p;
    auto& ws = watches_[false_lit.x];
    size_t i = 0;
    size_t j = 0;
    std::optional<ClauseId> conflict;
    while (i < ws.size()) {
      ClauseId cid = ws[i++];
      auto& c = clauses_[cid].lits;
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      if (value(c[0]) == Value::True) {
        ws[j++] = cid;
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != Value::False) {
          std::swap(c[1], c[k]);
          watches_[c[1].x].push_back(cid);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = cid;
      if (value(c[0]) == Value::False) {
        conflict = cid;
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        enqueue(c[0], cid);
        ++stats_.propagations;
      }
    }
    ws.resize(j);
    if (conflict) {
      qhead_ = trail_.size();
      return conflict;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Conflict analysis

ProofNodeId SatSolver::log_resolution(BoolClause& current, ProofNodeId current_node, Var pivot, ClauseId with) {
  auto n = proof_.add_resolvent(pivot, current_node, clauses_[with].proof);
  current = proof_.node(n).clause;
  return n;
}

void SatSolver::strip_level_zero(BoolClause& clause, ProofNodeId& node) {
  size_t end = trail_lim_.empty() ? trail_.size() : trail_lim_[0];
  for (size_t i = end; i-- > 0;) {
    Lit t = trail_[i];
    if (std::binary_search(clause.begin(), clause.end(), ~t)) {
      node = log_resolution(clause, node, t.var(), reasons_[t.var()]);
    }
  }
}

void SatSolver::derive_empty(ClauseId conflict) {
  inconsistent_ = true;
  if (!options_.log_proof) return;
  BoolClause current = normalized(clauses_[conflict].lits);
  ProofNodeId node = clauses_[conflict].proof;
  strip_level_zero(current, node);
  if (!current.empty()) throw Error("internal error: level-0 refutation left literals behind");
  proof_.set_final(node);
}

std::pair<BoolClause, ProofNodeId> SatSolver::analyze(ClauseId conflict) {
  BoolClause learnt{Lit{}};  // slot 0 reserved for the asserting literal
  std::vector<std::pair<Var, ClauseId>> steps;
  int path = 0;
  std::optional<Lit> p;
  size_t idx = trail_.size();
  ClauseId confl = conflict;
  do {
    for (Lit q : clauses_[confl].lits) {
      Var v = q.var();
      if (p && v == p->var()) continue;
      if (!seen_[v] && level(v) > 0) {
        seen_[v] = 1;
        bump(v);
        if (level(v) >= decision_level()) {
          ++path;
        } else {
          learnt.push_back(q);
        }
      }
    }
    while (!seen_[trail_[--idx].var()]) {
    }
    p = trail_[idx];
    confl = reasons_[p->var()];
    seen_[p->var()] = 0;
    --path;
    if (path > 0) steps.emplace_back(p->var(), confl);
  } while (path > 0);
  learnt[0] = ~*p;

  if (options_.minimize) {
    // Drop literals whose reason is subsumed by the rest of the clause.
    for (size_t i = 1; i < learnt.size();) {
      Var v = learnt[i].var();
      ClauseId r = reasons_[v];
      bool redundant = r != kNoReason;
      if (redundant) {
        for (Lit q : clauses_[r].lits) {
          Var u = q.var();
          if (u == v || level(u) == 0) continue;
          if (!seen_[u]) {
            redundant = false;
            break;
          }
        }
      }
      if (redundant) {
        steps.emplace_back(v, r);
        seen_[v] = 0;
        learnt[i] = learnt.back();
        learnt.pop_back();
      } else {
        ++i;
      }
    }
  }
  for (size_t i = 1; i < learnt.size(); ++i) seen_[learnt[i].var()] = 0;

  ProofNodeId node = 0;
  if (options_.log_proof) {
    BoolClause current = normalized(clauses_[conflict].lits);
    node = clauses_[conflict].proof;
    for (auto [pivot, with] : steps) node = log_resolution(current, node, pivot, with);
    strip_level_zero(current, node);
    if (current != normalized(learnt)) throw Error("internal error: logged resolvent differs from learned clause");
  }

  // Second-highest level goes to slot 1 for watching.
  if (learnt.size() > 1) {
    size_t best = 1;
    for (size_t i = 2; i < learnt.size(); ++i) {
      if (level(learnt[i].var()) > level(learnt[best].var())) best = i;
    }
    std::swap(learnt[1], learnt[best]);
  }
  return {std::move(learnt), node};
}

bool SatSolver::resolve_conflict(ClauseId conflict) {
  ++stats_.conflicts;
  if (decision_level() == 0) {
    derive_empty(conflict);
    return false;
  }
  auto [learnt, node] = analyze(conflict);
  uint32_t bt = learnt.size() == 1 ? 0 : level(learnt[1].var());
  cancel_until(bt);
  Lit asserting = learnt[0];
  ClauseId id = store_clause(std::move(learnt), kLearnedTag, true, node);
  attach(id);
  enqueue(asserting, id);
  var_inc_ /= options_.var_decay;
  return true;
}

void SatSolver::analyze_final(Lit failed) {
  // `failed` is an assumption that is currently false.
  final_conflict_.clear();
  final_conflict_.push_back(~failed);
  if (decision_level() == 0) return;
  seen_[failed.var()] = 1;
  for (size_t i = trail_.size(); i-- > trail_lim_[0];) {
    Var x = trail_[i].var();
    if (!seen_[x]) continue;
    if (reasons_[x] == kNoReason) {
      if (x != failed.var()) final_conflict_.push_back(~trail_[i]);
    } else {
      for (Lit q : clauses_[reasons_[x]].lits) {
        if (q.var() != x && level(q.var()) > 0) seen_[q.var()] = 1;
      }
    }
    seen_[x] = 0;
  }
  seen_[failed.var()] = 0;
  final_conflict_ = normalized(std::move(final_conflict_));
}

// ---------------------------------------------------------------------------
// Theory clauses

std::optional<ClauseId> SatSolver::add_theory_clauses(std::vector<TheoryClause>& incoming) {
  struct Entry {
    ClauseId id;
    bool fresh;
  };
  std::vector<Entry> entries;
  for (auto& tc : incoming) {
    BoolClause lits = normalized(std::move(tc.lits));
    if (is_tautology(lits)) continue;
    if (!lits.empty()) ensure_vars(lits.back().var() + 1);
    if (auto it = input_index_.find(lits); it != input_index_.end()) {
      entries.push_back({it->second, false});
      continue;
    }
    auto id = static_cast<ClauseId>(clauses_.size());
    ProofNodeId node = options_.log_proof ? proof_.add_leaf(id, lits) : 0;
    store_clause(std::move(lits), tc.tag, false, node);
    ++stats_.theory_clauses;
    entries.push_back({id, true});
  }
  if (entries.empty()) return std::nullopt;

  struct State {
    bool conflict = false;
    bool unit = false;
    uint32_t level = 0;
  };
  auto classify = [&](ClauseId id) {
    State s;
    uint32_t non_false = 0;
    bool undef = false;
    for (Lit l : clauses_[id].lits) {
      Value v = value(l);
      if (v == Value::False) {
        s.level = std::max(s.level, level(l.var()));
      } else {
        ++non_false;
        undef = v == Value::Undef;
      }
    }
    s.conflict = non_false == 0;
    s.unit = non_false == 1 && undef;
    return s;
  };

  std::optional<ClauseId> conflict;
  uint32_t conflict_level = 0;
  std::optional<uint32_t> unit_level;
  for (const auto& e : entries) {
    State s = classify(e.id);
    if (s.conflict && (!conflict || s.level < conflict_level)) {
      conflict = e.id;
      conflict_level = s.level;
    } else if (s.unit) {
      unit_level = std::min(unit_level.value_or(s.level), s.level);
    }
  }
  if (conflict) {
    cancel_until(conflict_level);
  } else if (unit_level) {
    cancel_until(*unit_level);
  }
  for (const auto& e : entries) {
    if (e.fresh) attach(e.id);
  }
  if (conflict) return conflict;
  for (const auto& e : entries) {
    State s = classify(e.id);
    if (s.conflict) return e.id;
    if (s.unit) {
      for (Lit l : clauses_[e.id].lits) {
        if (value(l) == Value::Undef) {
          enqueue(l, e.id);
          break;
        }
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Branching

bool SatSolver::heap_less(Var a, Var b) const {
  if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
  return a < b;
}

void SatSolver::heap_up(size_t i) {
  Var v = heap_[i];
  while (i > 0) {
    size_t parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = static_cast<int64_t>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<int64_t>(i);
}

void SatSolver::heap_down(size_t i) {
  Var v = heap_[i];
  for (;;) {
    size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = static_cast<int64_t>(i);
    i = child;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<int64_t>(i);
}

void SatSolver::heap_insert(Var v) {
  if (heap_pos_[v] >= 0) return;
  heap_.push_back(v);
  heap_pos_[v] = static_cast<int64_t>(heap_.size() - 1);
  heap_up(heap_.size() - 1);
}

void SatSolver::bump(Var v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(static_cast<size_t>(heap_pos_[v]));
}

std::optional<Lit> SatSolver::pick_branch() {
  if (options_.random_decision_freq > 0 && !heap_.empty()) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng_) < options_.random_decision_freq) {
      std::uniform_int_distribution<size_t> pick(0, heap_.size() - 1);
      Var v = heap_[pick(rng_)];
      if (value(v) == Value::Undef) return Lit::make(v, !phase_[v]);
    }
  }
  while (!heap_.empty()) {
    Var v = heap_[0];
    heap_[0] = heap_.back();
    heap_pos_[heap_[0]] = 0;
    heap_.pop_back();
    heap_pos_[v] = -1;
    if (!heap_.empty()) heap_down(0);
    if (value(v) == Value::Undef) return Lit::make(v, !phase_[v]);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Search

Status SatSolver::solve(std::span<const Lit> assumptions) {
  model_.clear();
  final_conflict_.clear();
  cancel_until(0);
  if (inconsistent_) return Status::Unsat;
  assumptions_.assign(assumptions.begin(), assumptions.end());
  for (Lit a : assumptions_) ensure_vars(a.var() + 1);

  int64_t conflicts = 0;
  uint64_t restart_limit = options_.restart_first;
  uint64_t since_restart = 0;

  for (;;) {
    std::optional<ClauseId> conflict = propagate();
    if (!conflict && theory_) {
      std::vector<TheoryClause> lemmas;
      theory_->check(trail_, false, lemmas);
      if (!lemmas.empty()) {
        conflict = add_theory_clauses(lemmas);
        if (!conflict) continue;
      }
    }
    if (conflict) {
      ++conflicts;
      ++since_restart;
      if (!resolve_conflict(*conflict)) return Status::Unsat;
      if (options_.conflict_budget >= 0 && conflicts > options_.conflict_budget) {
        cancel_until(0);
        return Status::Unknown;
      }
      if (restarts_enabled_ && since_restart >= restart_limit) {
        ++stats_.restarts;
        since_restart = 0;
        restart_limit = static_cast<uint64_t>(static_cast<double>(restart_limit) * options_.restart_factor);
        cancel_until(0);
      }
      continue;
    }

    std::optional<Lit> next;
    while (decision_level() < assumptions_.size()) {
      Lit a = assumptions_[decision_level()];
      if (value(a) == Value::True) {
        new_decision_level();
      } else if (value(a) == Value::False) {
        analyze_final(a);
        cancel_until(0);
        return Status::Unsat;
      } else {
        next = a;
        break;
      }
    }
    if (!next) {
      next = pick_branch();
      if (!next) {
        if (theory_) {
          std::vector<TheoryClause> lemmas;
          theory_->check(trail_, true, lemmas);
          if (!lemmas.empty()) {
            auto c = add_theory_clauses(lemmas);
            if (c) {
              ++conflicts;
              if (!resolve_conflict(*c)) return Status::Unsat;
              if (options_.conflict_budget >= 0 && conflicts > options_.conflict_budget) {
                cancel_until(0);
                return Status::Unknown;
              }
            }
            continue;
          }
        }
        model_.assign(num_vars(), false);
        for (Var v = 0; v < num_vars(); ++v) model_[v] = assigns_[v] == Value::True;
        cancel_until(0);
        return Status::Sat;
      }
      ++stats_.decisions;
    }
    new_decision_level();
    enqueue(*next, kNoReason);
  }
}

// ---------------------------------------------------------------------------
// One-shot entry points

namespace {

size_t vars_needed(std::span<const BoolClause> clauses, size_t at_least) {
  size_t n = at_least;
  for (const auto& c : clauses) {
    for (Lit l : c) n = std::max<size_t>(n, l.var() + 1);
  }
  return n;
}

}  // namespace

SatVerdict sat_solve(std::span<const BoolClause> clauses, std::span<const Lit> assumptions, SatOptions options,
                     size_t num_vars) {
  SatSolver solver(options);
  solver.ensure_vars(vars_needed(clauses, num_vars));
  for (uint32_t i = 0; i < clauses.size(); ++i) solver.add_clause(clauses[i], i);
  SatVerdict v;
  v.status = solver.solve(assumptions);
  if (v.status == Status::Sat) v.model = solver.model();
  if (v.status == Status::Unsat) {
    v.final_conflict = solver.final_conflict();
    if (options.log_proof && solver.inconsistent()) v.proof = solver.proof();
  }
  return v;
}

SelectorResult solve_with_selectors(std::span<const BoolClause> clauses, SatOptions options, size_t num_vars) {
  SatSolver solver(options);
  size_t n = vars_needed(clauses, num_vars);
  solver.ensure_vars(n);
  std::vector<Lit> selectors;
  selectors.reserve(clauses.size());
  for (uint32_t i = 0; i < clauses.size(); ++i) {
    Lit s = Lit::make(solver.new_var(), false);
    selectors.push_back(s);
    BoolClause guarded = clauses[i];
    guarded.push_back(~s);
    solver.add_clause(guarded, i);
  }
  SelectorResult r;
  r.status = solver.solve(selectors);
  if (r.status != Status::Unsat) return r;
  r.final_conflict = solver.final_conflict();
  for (Lit l : r.final_conflict) {
    if (l.var() < n || !l.negative()) throw Error("internal error: final conflict mentions a non-selector literal");
    r.core.push_back(l.var() - static_cast<uint32_t>(n));
  }
  std::sort(r.core.begin(), r.core.end());
  return r;
}

}  // namespace lemlift::sat
