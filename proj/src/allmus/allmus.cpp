#include "lemlift/allmus.hpp"

#include <algorithm>
#include <functional>

namespace lemlift::allmus {

namespace {

using sat::Lit;

bool subset_of(const IndexSet& a, const IndexSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

bool intersects(const IndexSet& a, const IndexSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

/// Sequential counter for "at most k of xs are true", every clause guarded by
/// the negation of `guard`.
void at_most(smt::SmtSolver& s, const std::vector<Lit>& xs, size_t k, Lit guard) {
  const size_t n = xs.size();
  if (k >= n) return;
  auto add = [&](std::vector<Lit> lits) {
    lits.push_back(~guard);
    s.add_clause(lits, 0);
  };
  if (k == 0) {
    for (auto x : xs) add({~x});
    return;
  }
  std::vector<std::vector<Lit>> r(n, std::vector<Lit>(k));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < k; ++j) r[i][j] = Lit::make(s.new_var(), false);
  }
  add({~xs[0], r[0][0]});
  for (size_t j = 1; j < k; ++j) add({~r[0][j]});
  for (size_t i = 1; i < n; ++i) {
    add({~xs[i], r[i][0]});
    for (size_t j = 0; j < k; ++j) add({~r[i - 1][j], r[i][j]});
    for (size_t j = 1; j < k; ++j) add({~xs[i], ~r[i - 1][j - 1], r[i][j]});
    add({~xs[i], ~r[i - 1][k - 1]});
  }
}

void sort_sets(std::vector<IndexSet>& sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
}

}  // namespace

bool hits_all(const IndexSet& candidate, const std::vector<IndexSet>& sets) {
  for (const auto& s : sets) {
    if (!intersects(candidate, s)) return false;
  }
  return true;
}

McsResult enumerate_mcs(const Formula& formula, size_t cap, smt::SmtOptions options) {
  McsResult result;
  const size_t n = formula.size();
  smt::SmtSolver s(formula.context_ptr(), smt::theory_for(formula.logic()), options);
  std::vector<Lit> selectors, relaxed;  // s_i, and not s_i
  for (const auto& c : formula.clauses()) {
    Lit sel = Lit::make(s.new_var(), false);
    auto lits = t2p(c);
    lits.push_back(~sel);
    s.add_clause(lits, c.origin.index);
    selectors.push_back(sel);
    relaxed.push_back(~sel);
  }
  auto st = s.solve(selectors);
  if (st == Status::Sat) {
    result.sat = true;
    return result;
  }
  if (st == Status::Unknown) {
    result.complete = false;
    return result;
  }
  for (size_t k = 1; k <= n; ++k) {
    Lit guard = Lit::make(s.new_var(), false);
    at_most(s, relaxed, k, guard);
    for (;;) {
      std::vector<Lit> assume{guard};
      st = s.solve(assume);
      if (st == Status::Unknown) {
        result.complete = false;
        sort_sets(result.mcses);
        return result;
      }
      if (st == Status::Unsat) break;
      // The violated clauses form the correction set; every smaller one is
      // already blocked, so it is minimal.
      const auto& model = s.model();
      IndexSet mcs;
      for (uint32_t i = 0; i < n; ++i) {
        bool sat = false;
        for (auto l : formula.clause(i).lits) sat = sat || model[l.atom] == l.positive;
        if (!sat) mcs.push_back(i);
      }
      if (mcs.empty()) throw Error("internal: correction set is empty on an unsatisfiable formula");
      std::vector<Lit> block;
      for (auto i : mcs) block.push_back(selectors[i]);
      s.add_clause(block, 0);
      result.mcses.push_back(std::move(mcs));
      if (result.mcses.size() >= cap) {
        result.complete = false;
        sort_sets(result.mcses);
        return result;
      }
    }
    st = s.solve();
    if (st == Status::Unsat) break;
    if (st == Status::Unknown) {
      result.complete = false;
      break;
    }
  }
  sort_sets(result.mcses);
  return result;
}

MusResult minimal_hitting_sets(const std::vector<IndexSet>& mcses, size_t cap) {
  MusResult result;
  std::vector<IndexSet> found;
  bool stop = false;
  std::function<void(IndexSet&)> search = [&](IndexSet& chosen) {
    if (stop) return;
    for (const auto& f : found) {
      if (subset_of(f, chosen)) return;
    }
    const IndexSet* pick = nullptr;
    for (const auto& m : mcses) {
      if (!intersects(chosen, m) && (!pick || m.size() < pick->size())) pick = &m;
    }
    if (!pick) {
      found.push_back(chosen);
      if (found.size() >= cap) stop = true;
      return;
    }
    for (auto e : *pick) {
      auto pos = std::lower_bound(chosen.begin(), chosen.end(), e);
      chosen.insert(pos, e);
      search(chosen);
      chosen.erase(std::lower_bound(chosen.begin(), chosen.end(), e));
      if (stop) return;
    }
  };
  IndexSet start;
  if (!mcses.empty()) search(start);
  for (const auto& h : found) {
    bool minimal = true;
    for (const auto& g : found) minimal = minimal && (g == h || !subset_of(g, h));
    if (minimal) result.muses.push_back(h);
  }
  sort_sets(result.muses);
  result.complete = !stop;
  return result;
}

IndexSet single_mus(const std::vector<IndexSet>& mcses) {
  IndexSet h;
  for (;;) {
    const IndexSet* pick = nullptr;
    for (const auto& m : mcses) {
      if (!intersects(h, m) && (!pick || m.size() < pick->size())) pick = &m;
    }
    if (!pick) break;
    h.insert(std::lower_bound(h.begin(), h.end(), pick->front()), pick->front());
  }
  for (size_t k = h.size(); k-- > 0;) {
    IndexSet without = h;
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(k));
    if (hits_all(without, mcses)) h = std::move(without);
  }
  return h;
}

}  // namespace lemlift::allmus
