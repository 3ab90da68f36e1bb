#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>

#include "lemlift/frontend.hpp"

namespace lemlift::frontend {

std::string write_dimacs(const DimacsDocument& doc) {
  std::string out = "p cnf " + std::to_string(doc.num_vars) + " " + std::to_string(doc.clauses.size()) + "\n";
  for (const auto& c : doc.clauses) {
    for (auto l : c) {
      out += std::to_string(l.to_dimacs());
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

DimacsDocument to_dimacs(std::span<const sat::BoolClause> clauses, const AtomTable& table) {
  DimacsDocument doc;
  doc.num_vars = table.size();
  for (const auto& c : clauses) {
    for (auto l : c) {
      if (l.var() >= table.size()) throw Error("clause uses a variable outside the atom table");
    }
    doc.clauses.push_back(c);
  }
  return doc;
}

namespace {

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    pos = eol + 1;
  }
  return out;
}

int64_t parse_int(std::string_view tok, size_t line) {
  int64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw Error("line " + std::to_string(line) + ": not an integer: '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

DimacsDocument read_dimacs(std::string_view text) {
  DimacsDocument doc;
  std::optional<size_t> declared_clauses;
  sat::BoolClause current;
  bool open = false;
  auto lines = lines_of(text);
  for (size_t n = 0; n < lines.size(); ++n) {
    auto toks = tokens(lines[n]);
    if (toks.empty() || toks[0] == "c" || toks[0][0] == 'c') continue;
    if (toks[0] == "p") {
      if (declared_clauses) throw Error("line " + std::to_string(n + 1) + ": duplicate header");
      if (toks.size() != 4 || toks[1] != "cnf") throw Error("line " + std::to_string(n + 1) + ": malformed header");
      auto vars = parse_int(toks[2], n + 1), count = parse_int(toks[3], n + 1);
      if (vars < 0 || count < 0) throw Error("line " + std::to_string(n + 1) + ": negative header count");
      doc.num_vars = static_cast<size_t>(vars);
      declared_clauses = static_cast<size_t>(count);
      continue;
    }
    if (!declared_clauses) throw Error("line " + std::to_string(n + 1) + ": clause before header");
    for (auto tok : toks) {
      int64_t v = parse_int(tok, n + 1);
      if (v == 0) {
        doc.clauses.push_back(std::move(current));
        current.clear();
        open = false;
        continue;
      }
      if (static_cast<size_t>(v < 0 ? -v : v) > doc.num_vars) {
        throw Error("line " + std::to_string(n + 1) + ": variable " + std::to_string(v) + " exceeds header");
      }
      current.push_back(sat::Lit::from_dimacs(static_cast<int>(v)));
      open = true;
    }
  }
  if (!declared_clauses) throw Error("missing 'p cnf' header");
  if (open) throw Error("last clause is not terminated by 0");
  if (doc.clauses.size() != *declared_clauses) {
    throw Error("header declares " + std::to_string(*declared_clauses) + " clauses, body has " +
                std::to_string(doc.clauses.size()));
  }
  return doc;
}

std::vector<uint32_t> read_core(std::string_view text, const DimacsDocument& original, CoreMode mode) {
  std::vector<uint32_t> out;
  if (mode == CoreMode::IndexList) {
    auto lines = lines_of(text);
    for (size_t n = 0; n < lines.size(); ++n) {
      for (auto tok : tokens(lines[n])) {
        int64_t v = parse_int(tok, n + 1);
        if (v < 1 || static_cast<size_t>(v) > original.clauses.size()) {
          throw Error("line " + std::to_string(n + 1) + ": clause index " + std::to_string(v) + " out of range 1.." +
                      std::to_string(original.clauses.size()));
        }
        out.push_back(static_cast<uint32_t>(v - 1));
      }
    }
  } else {
    auto subset = read_dimacs(text);
    auto key = [](sat::BoolClause c) {
      std::sort(c.begin(), c.end(), [](sat::Lit a, sat::Lit b) { return a.x < b.x; });
      return c;
    };
    std::multimap<std::vector<uint32_t>, uint32_t> by_clause;
    for (uint32_t i = 0; i < original.clauses.size(); ++i) {
      std::vector<uint32_t> k;
      for (auto l : key(original.clauses[i])) k.push_back(l.x);
      by_clause.emplace(std::move(k), i);
    }
    for (size_t n = 0; n < subset.clauses.size(); ++n) {
      std::vector<uint32_t> k;
      for (auto l : key(subset.clauses[n])) k.push_back(l.x);
      auto it = by_clause.lower_bound(k);  // equal keys keep insertion order, so this is the lowest unused index
      if (it == by_clause.end() || it->first != k) {
        throw Error("core clause " + std::to_string(n + 1) + " (" + sat::to_string(subset.clauses[n]) +
                    ") matches no unused clause of the original");
      }
      out.push_back(it->second);
      by_clause.erase(it);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string write_index_list(std::span<const uint32_t> indices) {
  std::string out;
  for (auto i : indices) out += std::to_string(i + 1) + "\n";
  return out;
}

}  // namespace lemlift::frontend
