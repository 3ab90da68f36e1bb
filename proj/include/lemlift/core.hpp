// Unsatisfiable-core extraction: lemma lifting, the SMT-level baselines,
// deletion-based minimization and an independent checker.
#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "lemlift/frontend.hpp"
#include "lemlift/smt.hpp"

namespace lemlift::core {

using sat::Status;

enum class Method : uint8_t { LiftProof, LiftSelectors, LiftExternal, SmtProof, SmtSelectors };

std::string to_string(Method m);
std::optional<Method> parse_method(std::string_view name);
const std::vector<Method>& all_methods();

/// A failure of the external extractor, tagged with the stage that failed.
class BridgeError : public Error {
 public:
  BridgeError(std::string stage, const std::string& message)
      : Error("external extractor (" + stage + "): " + message), stage(std::move(stage)) {}
  std::string stage;  // config, write, run, timeout, parse, validate
};

struct ExternalConfig {
  /// Shell command with {in} (DIMACS path) and {out} (core path) placeholders.
  std::string command;
  frontend::CoreMode mode = frontend::CoreMode::IndexList;
  std::chrono::milliseconds timeout{60000};
};

struct CoreOptions {
  Method method = Method::LiftProof;
  /// Re-extract from the Boolean core until its size is stable.
  bool fixpoint = false;
  bool minimize = false;
  bool verify = false;
  ExternalConfig external;
  smt::SmtOptions smt;
};

struct CoreReport {
  Status verdict = Status::Unknown;
  std::vector<uint32_t> core;        // 0-based clause indices, ascending; empty unless unsat
  std::vector<uint32_t> assertions;  // assertion ids covered by the core, ascending
  Method method = Method::LiftProof;
  size_t input_clauses = 0;
  size_t lemmas = 0;                 // lemma lifting only
  std::optional<bool> verified;      // set when verification ran
};

/// Dispatches on `options.method`.
CoreReport extract_core(const Formula& formula, const CoreOptions& options);

CoreReport lemma_lift_core(const Formula& formula, const CoreOptions& options);
CoreReport smt_proof_core(const Formula& formula, const CoreOptions& options = {});
CoreReport smt_assumption_core(const Formula& formula, const CoreOptions& options = {});

/// Core of an unsatisfiable CNF with the internal proof or selector extractor
/// (`method` LiftProof or LiftSelectors). Throws Error on satisfiable input.
std::vector<uint32_t> boolean_core(std::span<const sat::BoolClause> clauses, size_t num_vars, Method method,
                                   bool fixpoint = false);

/// Runs the external extractor on `clauses` and validates its answer.
std::vector<uint32_t> external_bridge(std::span<const sat::BoolClause> clauses, size_t num_vars,
                                      const ExternalConfig& config);

/// Deletion-based minimization, later clauses tried first. Throws Error when
/// `core` is not theory-unsatisfiable.
std::vector<uint32_t> minimize_core(const Formula& formula, std::span<const uint32_t> core);

struct CoreCheck {
  bool ok = false;
  std::string violation;
};

CoreCheck check_core(const Formula& formula, std::span<const uint32_t> core);

/// Whether the clauses at `indices` are theory-unsatisfiable.
bool subset_unsat(const Formula& formula, std::span<const uint32_t> indices);

std::vector<uint32_t> assertions_of(const Formula& formula, std::span<const uint32_t> core);

}  // namespace lemlift::core
