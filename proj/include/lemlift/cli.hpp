// Command-line front end and benchmark statistics.
#pragma once

#include <iosfwd>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lemlift::cli {

constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr int kExitError = 1;
constexpr int kExitIncomplete = 2;

/// Environment variable holding the default conflict budget.
constexpr const char* kBudgetEnv = "LEMLIFT_BUDGET";

/// Quartiles are Tukey hinges: medians of the lower and upper halves, the
/// middle element belonging to both halves for odd sizes.
struct RatioStats {
  size_t count = 0;
  double q1 = 0, median = 0, mean = 0, q3 = 0;
};

RatioStats ratio_stats(std::vector<double> values);

struct BenchRecord {
  enum class Status : uint8_t { Verified, Unverified, Sat, Failed };
  std::string instance;
  size_t clauses = 0;
  std::string method;
  std::optional<size_t> core_size;
  double time_ms = 0;  // rounded to microseconds
  Status status = Status::Failed;

  bool operator==(const BenchRecord&) const = default;
};

std::string csv_header();
std::string to_csv(const BenchRecord& r);
/// Inverse of `to_csv`; throws Error on a malformed row.
BenchRecord parse_csv_row(std::string_view row);

struct RatioRow {
  std::string method;
  RatioStats stats;
};

/// Ratios other/baseline of core sizes over instances where both methods
/// produced a verified core, one row per non-baseline method in first-seen
/// order.
std::vector<RatioRow> ratio_table(const std::vector<BenchRecord>& records, const std::string& baseline);
std::string format_ratio_table(const std::vector<RatioRow>& rows, const std::string& baseline);

/// Entry point of the `lemlift` tool; `args` excludes the program name.
/// `self_exe` is the binary used as the default external extractor; when
/// empty it is resolved from /proc/self/exe.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const std::string& self_exe = {});

}  // namespace lemlift::cli
