#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lemlift/allmus.hpp"
#include "lemlift/cli.hpp"
#include "lemlift/core.hpp"
#include "lemlift/frontend.hpp"

namespace lemlift::cli {

namespace {

namespace fs = std::filesystem;
using sat::Status;

struct Input {
  frontend::AssertionSet set;
  Formula formula;
};

Input load(const std::string& path, std::ostream& err) {
  Input in;
  try {
    in.set = frontend::parse_file(path);
  } catch (const frontend::ParseError& e) {
    throw Error(path + ":" + e.what());
  }
  for (const auto& w : in.set.warnings) err << "warning: " << w << "\n";
  in.formula = frontend::cnf_convert(in.set);
  return in;
}

std::optional<int64_t> env_budget() {
  const char* v = std::getenv(kBudgetEnv);
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  long long b = std::strtoll(v, &end, 10);
  if (*end) throw Error(std::string(kBudgetEnv) + " is not an integer: '" + v + "'");
  return b;
}

int64_t resolve_budget(int64_t flag) {
  if (flag >= 0) return flag;
  return env_budget().value_or(-1);
}

std::string join_one_based(std::span<const uint32_t> indices) {
  std::string out;
  for (auto i : indices) {
    if (!out.empty()) out += ' ';
    out += std::to_string(i + 1);
  }
  return out;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

std::string resolve_self(const std::string& self_exe) {
  if (!self_exe.empty()) return self_exe;
  std::error_code ec;
  auto p = fs::read_symlink("/proc/self/exe", ec);
  if (ec) throw Error("cannot locate the lemlift binary for the default extractor; pass --extractor-cmd");
  return p.string();
}

std::optional<frontend::CoreMode> parse_mode(const std::string& s) {
  if (s == "index-list") return frontend::CoreMode::IndexList;
  if (s == "dimacs-subset") return frontend::CoreMode::DimacsSubset;
  return std::nullopt;
}

int exit_for(Status s) {
  switch (s) {
    case Status::Sat:
      return kExitSat;
    case Status::Unsat:
      return kExitUnsat;
    case Status::Unknown:
      return kExitIncomplete;
  }
  return kExitError;
}

const char* verdict_name(Status s) {
  switch (s) {
    case Status::Sat:
      return "sat";
    case Status::Unsat:
      return "unsat";
    case Status::Unknown:
      return "unknown";
  }
  return "unknown";
}

struct SolveArgs {
  std::string file;
  bool no_early_pruning = false;
  bool no_propagation = false;
  int64_t budget = -1;
  uint64_t seed = 0;
};

smt::SmtOptions smt_options(const SolveArgs& a) {
  smt::SmtOptions o;
  o.early_pruning = !a.no_early_pruning;
  o.theory_propagation = !a.no_propagation;
  o.conflict_budget = resolve_budget(a.budget);
  o.seed = a.seed;
  return o;
}

void add_solve_flags(CLI::App* cmd, SolveArgs& a) {
  cmd->add_option("file", a.file, "SMT-LIB 2 input")->required();
  cmd->add_flag("--no-early-pruning", a.no_early_pruning, "check the theory only on full assignments");
  cmd->add_flag("--no-theory-propagation", a.no_propagation, "do not add theory deductions");
  cmd->add_option("--budget", a.budget, "conflict budget, negative for none (default from LEMLIFT_BUDGET)");
  cmd->add_option("--seed", a.seed, "random seed of the SAT engine");
}

struct CoreArgs {
  SolveArgs solve;
  std::string method = "lift-proof";
  bool fixpoint = false;
  bool minimize = false;
  bool verify = false;
  std::string extractor_cmd;
  std::string extractor_mode = "index-list";
  double extractor_timeout = 60;
  std::string out_path;
};

core::CoreOptions core_options(const CoreArgs& a, const std::string& self_exe) {
  core::CoreOptions o;
  auto m = core::parse_method(a.method);
  if (!m) throw Error("unknown method '" + a.method + "'");
  o.method = *m;
  o.fixpoint = a.fixpoint;
  o.minimize = a.minimize;
  o.verify = a.verify;
  o.smt = smt_options(a.solve);
  auto mode = parse_mode(a.extractor_mode);
  if (!mode) throw Error("unknown extractor mode '" + a.extractor_mode + "'");
  o.external.mode = *mode;
  o.external.timeout = std::chrono::milliseconds(static_cast<int64_t>(a.extractor_timeout * 1000));
  if (!a.extractor_cmd.empty()) {
    o.external.command = a.extractor_cmd;
  } else if (o.method == core::Method::LiftExternal) {
    o.external.command = shell_quote(resolve_self(self_exe)) + " bool-core" + (a.fixpoint ? " --fixpoint" : "") +
                         " --mode " + a.extractor_mode + " {in} {out}";
  }
  return o;
}

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  auto in = load(a.file, err);
  auto r = smt::smt_solve(in.formula, smt_options(a));
  out << verdict_name(r.status) << "\n";
  return exit_for(r.status);
}

int cmd_core(const CoreArgs& a, const std::string& self_exe, std::ostream& out, std::ostream& err) {
  auto options = core_options(a, self_exe);
  auto in = load(a.solve.file, err);
  auto report = core::extract_core(in.formula, options);
  out << verdict_name(report.verdict) << "\n";
  if (report.verdict != Status::Unsat) return exit_for(report.verdict);
  if (report.verified && !*report.verified) {
    err << "error: core failed verification: " << core::check_core(in.formula, report.core).violation << "\n";
    return kExitError;
  }
  out << "core " << join_one_based(report.core) << "\n";
  out << "assertions " << join_one_based(report.assertions) << "\n";
  if (report.verified) out << "verified yes\n";
  if (!a.out_path.empty()) frontend::write_text_file(a.out_path, frontend::write_subset(in.set, report.assertions));
  return kExitUnsat;
}

int cmd_allmus(const SolveArgs& a, size_t cap, std::ostream& out, std::ostream& err) {
  auto in = load(a.file, err);
  auto mcs = allmus::enumerate_mcs(in.formula, cap, smt_options(a));
  allmus::MusResult mus;
  if (!mcs.sat) mus = allmus::minimal_hitting_sets(mcs.mcses, cap);
  bool complete = mcs.complete && mus.complete;
  if (!complete) out << "INCOMPLETE: enumeration stopped by the cap or the budget; sets below are partial\n";
  out << (mcs.sat ? "sat" : complete ? "unsat" : "unknown") << "\n";
  out << "mcs " << mcs.mcses.size() << "\n";
  for (const auto& s : mcs.mcses) out << join_one_based(s) << "\n";
  out << "mus " << mus.muses.size() << "\n";
  for (const auto& s : mus.muses) out << join_one_based(s) << "\n";
  if (!complete) return kExitIncomplete;
  return mcs.sat ? kExitSat : kExitUnsat;
}

struct BenchArgs {
  std::string dir;
  std::vector<std::string> methods;
  std::string baseline;
  int64_t budget = -1;
  std::string csv_path;
  bool minimize = false;
  std::string extractor_cmd;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return std::round(ms * 1000) / 1000;
}

int cmd_bench(const BenchArgs& a, const std::string& self_exe, std::ostream& out, std::ostream& err) {
  std::vector<std::string> methods = a.methods;
  if (methods.empty()) {
    for (auto m : core::all_methods()) methods.push_back(core::to_string(m));
  }
  for (const auto& m : methods) {
    if (!core::parse_method(m)) throw Error("unknown method '" + m + "'");
  }
  std::string baseline = a.baseline.empty() ? methods.front() : a.baseline;
  if (std::find(methods.begin(), methods.end(), baseline) == methods.end()) {
    throw Error("baseline '" + baseline + "' is not among the benchmarked methods");
  }
  if (!fs::is_directory(a.dir)) throw Error("not a directory: " + a.dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(a.dir)) {
    if (e.is_regular_file() && e.path().extension() == ".smt2") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  std::ofstream csv_file;
  if (!a.csv_path.empty()) {
    csv_file.open(a.csv_path);
    if (!csv_file) throw Error("cannot write " + a.csv_path);
  }
  std::ostream& csv = a.csv_path.empty() ? out : csv_file;
  csv << csv_header() << "\n";

  std::vector<BenchRecord> records;
  for (const auto& file : files) {
    std::optional<Input> in;
    try {
      std::ostringstream quiet;
      in = load(file.string(), quiet);
    } catch (const Error& e) {
      err << file.string() << ": " << e.what() << "\n";
    }
    for (const auto& m : methods) {
      BenchRecord r;
      r.instance = file.string();
      r.method = m;
      if (in) {
        r.clauses = in->formula.size();
        CoreArgs ca;
        ca.method = m;
        ca.minimize = a.minimize;
        ca.verify = true;
        ca.solve.budget = a.budget;
        ca.extractor_cmd = a.extractor_cmd;
        auto start = std::chrono::steady_clock::now();
        try {
          auto report = core::extract_core(in->formula, core_options(ca, self_exe));
          r.time_ms = elapsed_ms(start);
          if (report.verdict == Status::Sat) {
            r.status = BenchRecord::Status::Sat;
          } else if (report.verdict == Status::Unsat) {
            r.core_size = report.core.size();
            r.status = report.verified.value_or(false) ? BenchRecord::Status::Verified : BenchRecord::Status::Unverified;
          }
        } catch (const Error& e) {
          r.time_ms = elapsed_ms(start);
          err << file.string() << " [" << m << "]: " << e.what() << "\n";
        }
      }
      csv << to_csv(r) << "\n";
      records.push_back(std::move(r));
    }
  }
  csv.flush();
  if (!a.csv_path.empty()) {
    if (!csv_file) throw Error("write failed: " + a.csv_path);
  } else {
    out << "\n";
  }
  out << format_ratio_table(ratio_table(records, baseline), baseline);
  return 0;
}

struct BoolCoreArgs {
  std::string in, out;
  std::string method = "lift-proof";
  bool fixpoint = false;
  std::string mode = "index-list";
};

int cmd_bool_core(const BoolCoreArgs& a) {
  auto m = core::parse_method(a.method);
  if (!m || (*m != core::Method::LiftProof && *m != core::Method::LiftSelectors)) {
    throw Error("bool-core supports lift-proof and lift-selectors, not '" + a.method + "'");
  }
  auto mode = parse_mode(a.mode);
  if (!mode) throw Error("unknown output mode '" + a.mode + "'");
  auto doc = frontend::read_dimacs(frontend::read_text_file(a.in));
  auto core = core::boolean_core(doc.clauses, doc.num_vars, *m, a.fixpoint);
  if (*mode == frontend::CoreMode::IndexList) {
    frontend::write_text_file(a.out, frontend::write_index_list(core));
  } else {
    frontend::DimacsDocument sub{doc.num_vars, {}};
    for (auto i : core) sub.clauses.push_back(doc.clauses[i]);
    frontend::write_text_file(a.out, frontend::write_dimacs(sub));
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const std::string& self_exe) {
  CLI::App app{"Small unsatisfiable cores for SMT formulas by lemma lifting", "lemlift"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "decide satisfiability (exit 10 sat, 20 unsat)");
  add_solve_flags(solve_cmd, solve);

  CoreArgs core_args;
  auto* core_cmd = app.add_subcommand("core", "extract an unsatisfiable core");
  add_solve_flags(core_cmd, core_args.solve);
  core_cmd->add_option("--method", core_args.method,
                       "lift-proof, lift-selectors, lift-external, smt-proof or smt-selectors");
  core_cmd->add_flag("--fixpoint", core_args.fixpoint, "repeat Boolean extraction until the core is stable");
  core_cmd->add_flag("--minimize", core_args.minimize, "shrink the core to a minimal one by deletion");
  core_cmd->add_flag("--verify", core_args.verify, "re-check the core before printing it");
  core_cmd->add_option("--extractor-cmd", core_args.extractor_cmd,
                       "external extractor command with {in} and {out} placeholders");
  core_cmd->add_option("--extractor-mode", core_args.extractor_mode, "index-list or dimacs-subset");
  core_cmd->add_option("--extractor-timeout", core_args.extractor_timeout, "seconds")->check(CLI::PositiveNumber);
  core_cmd->add_option("--out", core_args.out_path, "write the core assertions as a new SMT-LIB file");

  SolveArgs mus_args;
  size_t cap = allmus::kDefaultCap;
  auto* mus_cmd = app.add_subcommand("allmus", "list all minimal correction sets and minimal cores");
  add_solve_flags(mus_cmd, mus_args);
  mus_cmd->add_option("--cap", cap, "maximum number of sets per block")->check(CLI::PositiveNumber);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "run core extraction over a directory and compare core sizes");
  bench_cmd->add_option("dir", bench.dir, "directory of .smt2 files")->required();
  bench_cmd->add_option("--methods", bench.methods, "methods to run (default all)")->delimiter(',');
  bench_cmd->add_option("--baseline", bench.baseline, "method the ratios are taken against (default the first)");
  bench_cmd->add_option("--budget", bench.budget, "conflict budget per run (default from LEMLIFT_BUDGET)");
  bench_cmd->add_option("--csv", bench.csv_path, "write rows to this file instead of stdout");
  bench_cmd->add_flag("--minimize", bench.minimize, "minimize every core");
  bench_cmd->add_option("--extractor-cmd", bench.extractor_cmd, "external extractor for lift-external");

  BoolCoreArgs bool_core;
  auto* bool_cmd = app.add_subcommand("bool-core", "extract a core of a DIMACS CNF (usable as external extractor)");
  bool_cmd->add_option("in", bool_core.in, "DIMACS input")->required();
  bool_cmd->add_option("out", bool_core.out, "core output")->required();
  bool_cmd->add_option("--method", bool_core.method, "lift-proof or lift-selectors");
  bool_cmd->add_flag("--fixpoint", bool_core.fixpoint, "repeat extraction until the core is stable");
  bool_cmd->add_option("--mode", bool_core.mode, "index-list or dimacs-subset");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitError;
  }
  try {
    if (solve_cmd->parsed()) return cmd_solve(solve, out, err);
    if (core_cmd->parsed()) return cmd_core(core_args, self_exe, out, err);
    if (mus_cmd->parsed()) return cmd_allmus(mus_args, cap, out, err);
    if (bench_cmd->parsed()) {
      bench.budget = resolve_budget(bench.budget);
      return cmd_bench(bench, self_exe, out, err);
    }
    if (bool_cmd->parsed()) return cmd_bool_core(bool_core);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace lemlift::cli
