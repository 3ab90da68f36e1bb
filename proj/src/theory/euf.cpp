#include <algorithm>
#include <set>

#include "solvers.hpp"

namespace lemlift::theory {

namespace {

void sort_unique(std::vector<Literal>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

EufSolver::EufSolver(std::shared_ptr<const Context> ctx) : ctx_(std::move(ctx)) {
  for (TermId t = 0; t < ctx_->num_terms(); ++t) {
    if (!ctx_->term(t).args.empty()) apps_.push_back(t);
  }
  reset();
}

void EufSolver::reset() {
  size_t n = ctx_->num_terms();
  uf_.resize(n);
  for (TermId t = 0; t < n; ++t) uf_[t] = t;
  forest_parent_.assign(n, std::nullopt);
  forest_edge_.assign(n, Edge{});
  dirty_ = false;
}

void EufSolver::rebuild() {
  reset();
  for (auto lit : asserted_) {
    if (!lit.positive) continue;
    const auto& eq = std::get<EqAtom>(ctx_->atoms().at(lit.atom));
    merge(eq.lhs, eq.rhs, Edge{false, lit, 0, 0});
  }
  close_congruences();
}

TermId EufSolver::find(TermId t) {
  while (uf_[t] != t) {
    uf_[t] = uf_[uf_[t]];
    t = uf_[t];
  }
  return t;
}

void EufSolver::reroot(TermId t) {
  // Reverse the path from t to its root so that t becomes the root.
  std::optional<TermId> prev;
  Edge prev_edge;
  TermId cur = t;
  for (;;) {
    auto next = forest_parent_[cur];
    Edge edge = forest_edge_[cur];
    forest_parent_[cur] = prev;
    forest_edge_[cur] = prev_edge;
    if (!next) break;
    prev = cur;
    prev_edge = edge;
    cur = *next;
  }
}

void EufSolver::merge(TermId a, TermId b, Edge why) {
  TermId ra = find(a), rb = find(b);
  if (ra == rb) return;
  reroot(a);
  forest_parent_[a] = b;
  forest_edge_[a] = why;
  uf_[ra] = rb;
}

void EufSolver::close_congruences() {
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<SymbolId, std::vector<TermId>>, TermId> signatures;
    for (TermId t : apps_) {
      const auto& node = ctx_->term(t);
      std::vector<TermId> key;
      key.reserve(node.args.size());
      for (TermId arg : node.args) key.push_back(find(arg));
      auto [it, inserted] = signatures.emplace(std::make_pair(node.symbol, std::move(key)), t);
      if (!inserted && find(it->second) != find(t)) {
        merge(it->second, t, Edge{true, {}, it->second, t});
        changed = true;
      }
    }
  }
}

void EufSolver::explain(TermId a, TermId b, std::vector<Literal>& out) {
  if (a == b) return;
  std::set<TermId> ancestors;
  for (std::optional<TermId> x = a; x; x = forest_parent_[*x]) ancestors.insert(*x);
  TermId lca = b;
  while (!ancestors.count(lca)) lca = *forest_parent_[lca];
  std::vector<std::pair<TermId, TermId>> pending;
  for (TermId start : {a, b}) {
    for (TermId x = start; x != lca; x = *forest_parent_[x]) {
      const Edge& e = forest_edge_[x];
      if (!e.congruence) {
        out.push_back(e.lit);
      } else {
        const auto& na = ctx_->term(e.a);
        const auto& nb = ctx_->term(e.b);
        for (size_t i = 0; i < na.args.size(); ++i) pending.emplace_back(na.args[i], nb.args[i]);
      }
    }
  }
  for (auto [x, y] : pending) explain(x, y, out);
}

std::optional<std::vector<Literal>> EufSolver::find_conflict() {
  for (auto lit : asserted_) {
    if (lit.positive) continue;
    const auto& eq = std::get<EqAtom>(ctx_->atoms().at(lit.atom));
    if (find(eq.lhs) == find(eq.rhs)) {
      std::vector<Literal> conflict{lit};
      explain(eq.lhs, eq.rhs, conflict);
      sort_unique(conflict);
      return conflict;
    }
  }
  return std::nullopt;
}

std::optional<std::vector<Literal>> EufSolver::assert_literal(Literal lit) {
  const auto* eq = lit.atom < ctx_->atoms().size() ? std::get_if<EqAtom>(&ctx_->atoms().at(lit.atom)) : nullptr;
  if (!eq) throw Error("literal is not an equality literal");
  if (eq->lhs >= uf_.size() || eq->rhs >= uf_.size()) throw Error("equality over a term created after the solver");
  if (dirty_) rebuild();
  record_assertion(lit);
  if (lit.positive) {
    merge(eq->lhs, eq->rhs, Edge{false, lit, 0, 0});
    close_congruences();
    return find_conflict();
  }
  if (find(eq->lhs) == find(eq->rhs)) {
    std::vector<Literal> conflict{lit};
    explain(eq->lhs, eq->rhs, conflict);
    sort_unique(conflict);
    return conflict;
  }
  return std::nullopt;
}

TheoryVerdict EufSolver::check_full() {
  if (dirty_) rebuild();
  TheoryVerdict verdict;
  if (auto c = find_conflict()) {
    verdict.sat = false;
    verdict.conflict = std::move(*c);
    return verdict;
  }
  std::map<TermId, uint32_t> number;
  for (TermId t = 0; t < uf_.size(); ++t) {
    if (ctx_->term(t).sort.kind != SortKind::Uninterpreted) continue;
    auto [it, inserted] = number.emplace(find(t), static_cast<uint32_t>(number.size()));
    verdict.witness.classes.emplace(t, it->second);
  }
  return verdict;
}

std::vector<Deduction> EufSolver::deductions() {
  if (dirty_) rebuild();
  std::vector<Deduction> out;
  std::vector<std::pair<Literal, const EqAtom*>> diseqs;
  for (auto lit : asserted_) {
    if (!lit.positive) diseqs.emplace_back(lit, &std::get<EqAtom>(ctx_->atoms().at(lit.atom)));
  }
  const auto& atoms = ctx_->atoms();
  for (AtomId a = 0; a < atoms.size(); ++a) {
    const auto* eq = std::get_if<EqAtom>(&atoms.at(a));
    if (!eq || is_asserted(a) || eq->lhs >= uf_.size() || eq->rhs >= uf_.size()) continue;
    TermId l = find(eq->lhs), r = find(eq->rhs);
    if (l == r) {
      Deduction d{Literal{a, true}, {}};
      explain(eq->lhs, eq->rhs, d.explanation);
      sort_unique(d.explanation);
      out.push_back(std::move(d));
      continue;
    }
    for (const auto& [lit, de] : diseqs) {
      TermId x = de->lhs, y = de->rhs;
      if (find(x) == r && find(y) == l) std::swap(x, y);
      if (find(x) != l || find(y) != r) continue;
      Deduction d{Literal{a, false}, {lit}};
      explain(eq->lhs, x, d.explanation);
      explain(eq->rhs, y, d.explanation);
      sort_unique(d.explanation);
      out.push_back(std::move(d));
      break;
    }
  }
  return out;
}

}  // namespace lemlift::theory
