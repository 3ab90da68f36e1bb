#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "lemlift/cli.hpp"
#include "lemlift/ir.hpp"

namespace lemlift::cli {

namespace {

double median_of(const std::vector<double>& v, size_t begin, size_t end) {
  size_t n = end - begin;
  size_t mid = begin + n / 2;
  return n % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2;
}

const char* status_name(BenchRecord::Status s) {
  switch (s) {
    case BenchRecord::Status::Verified:
      return "yes";
    case BenchRecord::Status::Unverified:
      return "no";
    case BenchRecord::Status::Sat:
      return "sat";
    case BenchRecord::Status::Failed:
      return "error";
  }
  return "error";
}

std::string quote_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_row(std::string_view row) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (size_t i = 0; i < row.size(); ++i) {
    char c = row[i];
    if (quoted) {
      if (c == '"' && i + 1 < row.size() && row[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw Error("unterminated quote in CSV row");
  return fields;
}

size_t parse_size(const std::string& s, const char* what) {
  size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw Error(std::string("bad ") + what + " in CSV row: '" + s + "'");
  }
  if (pos != s.size()) throw Error(std::string("bad ") + what + " in CSV row: '" + s + "'");
  return static_cast<size_t>(v);
}

}  // namespace

RatioStats ratio_stats(std::vector<double> values) {
  RatioStats s;
  s.count = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  size_t n = values.size();
  s.median = median_of(values, 0, n);
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  size_t half = (n + 1) / 2;  // lower half includes the middle element when n is odd
  s.q1 = median_of(values, 0, half);
  s.q3 = median_of(values, n - half, n);
  return s;
}

std::string csv_header() { return "instance,clauses,method,core_size,time_ms,verified"; }

std::string to_csv(const BenchRecord& r) {
  char time[64];
  std::snprintf(time, sizeof time, "%.3f", r.time_ms);
  return quote_field(r.instance) + "," + std::to_string(r.clauses) + "," + quote_field(r.method) + "," +
         (r.core_size ? std::to_string(*r.core_size) : std::string()) + "," + time + "," + status_name(r.status);
}

BenchRecord parse_csv_row(std::string_view row) {
  auto f = split_row(row);
  if (f.size() != 6) throw Error("CSV row has " + std::to_string(f.size()) + " fields, expected 6");
  BenchRecord r;
  r.instance = f[0];
  r.clauses = parse_size(f[1], "clause count");
  r.method = f[2];
  if (!f[3].empty()) r.core_size = parse_size(f[3], "core size");
  try {
    size_t pos = 0;
    r.time_ms = std::stod(f[4], &pos);
    if (pos != f[4].size()) throw Error("");
  } catch (const std::exception&) {
    throw Error("bad time in CSV row: '" + f[4] + "'");
  }
  bool known = false;
  for (auto s : {BenchRecord::Status::Verified, BenchRecord::Status::Unverified, BenchRecord::Status::Sat,
                 BenchRecord::Status::Failed}) {
    if (f[5] == status_name(s)) {
      r.status = s;
      known = true;
    }
  }
  if (!known) throw Error("bad verification status in CSV row: '" + f[5] + "'");
  return r;
}

std::vector<RatioRow> ratio_table(const std::vector<BenchRecord>& records, const std::string& baseline) {
  std::map<std::string, size_t> base;
  for (const auto& r : records) {
    if (r.method == baseline && r.status == BenchRecord::Status::Verified && r.core_size && *r.core_size > 0) {
      base.emplace(r.instance, *r.core_size);
    }
  }
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> ratios;
  for (const auto& r : records) {
    if (r.method == baseline) continue;
    if (!ratios.count(r.method)) {
      order.push_back(r.method);
      ratios[r.method];
    }
    auto it = base.find(r.instance);
    if (it == base.end() || r.status != BenchRecord::Status::Verified || !r.core_size) continue;
    ratios[r.method].push_back(static_cast<double>(*r.core_size) / static_cast<double>(it->second));
  }
  std::vector<RatioRow> rows;
  for (const auto& m : order) rows.push_back({m, ratio_stats(ratios[m])});
  return rows;
}

std::string format_ratio_table(const std::vector<RatioRow>& rows, const std::string& baseline) {
  size_t width = std::string("core size ratio").size();
  for (const auto& r : rows) width = std::max(width, r.method.size() + 1 + baseline.size());
  std::string out;
  char line[512];
  std::snprintf(line, sizeof line, "%-*s  %5s  %12s  %8s  %8s  %12s\n", static_cast<int>(width), "core size ratio", "n",
                "1st quartile", "median", "mean", "3rd quartile");
  out += line;
  for (const auto& r : rows) {
    std::string name = r.method + "/" + baseline;
    if (r.stats.count == 0) {
      std::snprintf(line, sizeof line, "%-*s  %5zu  %12s  %8s  %8s  %12s\n", static_cast<int>(width), name.c_str(),
                    r.stats.count, "-", "-", "-", "-");
    } else {
      std::snprintf(line, sizeof line, "%-*s  %5zu  %12.2f  %8.2f  %8.2f  %12.2f\n", static_cast<int>(width),
                    name.c_str(), r.stats.count, r.stats.q1, r.stats.median, r.stats.mean, r.stats.q3);
    }
    out += line;
  }
  return out;
}

}  // namespace lemlift::cli
