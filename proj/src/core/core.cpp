#include "lemlift/core.hpp"

#include <algorithm>

namespace lemlift::core {

std::string to_string(Method m) {
  switch (m) {
    case Method::LiftProof:
      return "lift-proof";
    case Method::LiftSelectors:
      return "lift-selectors";
    case Method::LiftExternal:
      return "lift-external";
    case Method::SmtProof:
      return "smt-proof";
    case Method::SmtSelectors:
      return "smt-selectors";
  }
  return "?";
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::LiftProof, Method::LiftSelectors, Method::LiftExternal,
                                           Method::SmtProof, Method::SmtSelectors};
  return methods;
}

std::optional<Method> parse_method(std::string_view name) {
  for (auto m : all_methods()) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

namespace {

std::vector<uint32_t> sorted_unique(std::vector<uint32_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

CoreReport finish(const Formula& formula, CoreReport report, const CoreOptions& options) {
  report.input_clauses = formula.size();
  if (report.verdict != Status::Unsat) {
    report.core.clear();
    return report;
  }
  report.core = sorted_unique(std::move(report.core));
  if (options.minimize) report.core = minimize_core(formula, report.core);
  if (options.verify) report.verified = check_core(formula, report.core).ok;
  report.assertions = assertions_of(formula, report.core);
  return report;
}

}  // namespace

std::vector<uint32_t> assertions_of(const Formula& formula, std::span<const uint32_t> core) {
  std::vector<uint32_t> out;
  for (auto i : core) out.push_back(formula.clause(i).origin.assertion);
  return sorted_unique(std::move(out));
}

std::vector<uint32_t> boolean_core(std::span<const sat::BoolClause> clauses, size_t num_vars, Method method,
                                   bool fixpoint) {
  if (method != Method::LiftProof && method != Method::LiftSelectors) {
    throw Error("boolean_core: not an internal extractor: " + to_string(method));
  }
  std::vector<uint32_t> current(clauses.size());
  for (uint32_t i = 0; i < current.size(); ++i) current[i] = i;
  for (;;) {
    std::vector<sat::BoolClause> sub;
    for (auto i : current) sub.push_back(clauses[i]);
    std::vector<uint32_t> local;
    if (method == Method::LiftProof) {
      sat::SatOptions o;
      o.log_proof = true;
      auto verdict = sat::sat_solve(sub, {}, o, num_vars);
      if (verdict.status != Status::Unsat) throw Error("Boolean core extraction on a satisfiable clause set");
      for (auto id : sat::proof_core(verdict.proof)) local.push_back(id);
    } else {
      auto r = sat::solve_with_selectors(sub, {}, num_vars);
      if (r.status != Status::Unsat) throw Error("Boolean core extraction on a satisfiable clause set");
      local = r.core;
    }
    std::vector<uint32_t> next;
    for (auto i : sorted_unique(std::move(local))) next.push_back(current[i]);
    bool stable = next.size() == current.size();
    current = std::move(next);
    if (!fixpoint || stable) return current;
  }
}

CoreReport lemma_lift_core(const Formula& formula, const CoreOptions& options) {
  CoreReport report;
  report.method = options.method;
  auto run = smt::smt_solve(formula, options.smt);
  report.verdict = run.status;
  report.lemmas = run.lemmas.size();
  if (run.status != Status::Unsat) return finish(formula, std::move(report), options);
  // originals first, then lemmas in discovery order
  std::vector<sat::BoolClause> cnf;
  for (const auto& c : formula.clauses()) cnf.push_back(t2p(c));
  for (const auto& l : run.lemmas.lemmas()) cnf.push_back(t2p(l.clause));
  const size_t num_vars = formula.context().atoms().size();
  std::vector<uint32_t> lifted;
  switch (options.method) {
    case Method::LiftProof:
    case Method::LiftSelectors:
      lifted = boolean_core(cnf, num_vars, options.method, options.fixpoint);
      break;
    case Method::LiftExternal:
      lifted = external_bridge(cnf, num_vars, options.external);
      break;
    default:
      throw Error("lemma_lift_core: not a lifting method: " + to_string(options.method));
  }
  for (auto i : lifted) {
    if (i < formula.size()) report.core.push_back(i);
  }
  return finish(formula, std::move(report), options);
}

CoreReport smt_proof_core(const Formula& formula, const CoreOptions& options) {
  CoreReport report;
  report.method = Method::SmtProof;
  auto o = options.smt;
  o.log_proof = true;
  smt::SmtSolver solver(formula.context_ptr(), smt::theory_for(formula.logic()), o);
  for (const auto& c : formula.clauses()) solver.add_clause(c);
  report.verdict = solver.solve();
  if (report.verdict == Status::Unsat) {
    for (auto id : sat::proof_core(solver.proof())) {
      auto origin = solver.origin_of(id);
      if (origin.kind == Origin::Kind::Original) report.core.push_back(origin.index);
    }
  }
  return finish(formula, std::move(report), options);
}

CoreReport smt_assumption_core(const Formula& formula, const CoreOptions& options) {
  CoreReport report;
  report.method = Method::SmtSelectors;
  smt::SmtSolver solver(formula.context_ptr(), smt::theory_for(formula.logic()), options.smt);
  std::vector<sat::Lit> assumptions;
  std::vector<uint32_t> index_of_var;
  const size_t base = solver.sat().num_vars();
  for (const auto& c : formula.clauses()) {
    sat::Var s = solver.new_var();
    auto lits = t2p(c);
    lits.push_back(sat::Lit::make(s, true));
    solver.add_clause(lits, c.origin.index);
    assumptions.push_back(sat::Lit::make(s, false));
    index_of_var.push_back(c.origin.index);
  }
  report.verdict = solver.solve(assumptions);
  if (report.verdict == Status::Unsat) {
    for (auto l : solver.final_conflict()) {
      if (l.var() >= base) report.core.push_back(index_of_var[l.var() - base]);
    }
  }
  return finish(formula, std::move(report), options);
}

CoreReport extract_core(const Formula& formula, const CoreOptions& options) {
  switch (options.method) {
    case Method::LiftProof:
    case Method::LiftSelectors:
    case Method::LiftExternal:
      return lemma_lift_core(formula, options);
    case Method::SmtProof:
      return smt_proof_core(formula, options);
    case Method::SmtSelectors:
      return smt_assumption_core(formula, options);
  }
  throw Error("unknown method");
}

bool subset_unsat(const Formula& formula, std::span<const uint32_t> indices) {
  return smt::smt_solve(formula.subset(indices)).status == Status::Unsat;
}

CoreCheck check_core(const Formula& formula, std::span<const uint32_t> core) {
  std::vector<bool> seen(formula.size());
  for (auto i : core) {
    if (i >= formula.size()) return {false, "index " + std::to_string(i) + " out of range"};
    if (seen[i]) return {false, "duplicate index " + std::to_string(i)};
    seen[i] = true;
  }
  auto r = smt::smt_solve(formula.subset(core));
  if (r.status == Status::Sat) return {false, "core is satisfiable"};
  if (r.status == Status::Unknown) return {false, "core satisfiability unknown"};
  return {true, {}};
}

std::vector<uint32_t> minimize_core(const Formula& formula, std::span<const uint32_t> core) {
  auto current = sorted_unique({core.begin(), core.end()});
  if (!check_core(formula, current).ok) throw Error("minimize_core: input is not an unsatisfiable core");
  for (size_t k = current.size(); k-- > 0;) {
    std::vector<uint32_t> candidate = current;
    candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(k));
    if (subset_unsat(formula, candidate)) current = std::move(candidate);
  }
  return current;
}

}  // namespace lemlift::core
