// Input language, CNF conversion, DIMACS and core-exchange files.
#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lemlift/boolean.hpp"
#include "lemlift/ir.hpp"

namespace lemlift::frontend {

class ParseError : public Error {
 public:
  ParseError(size_t line, size_t column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line(line), column(column) {}
  size_t line, column;
};

/// Boolean structure over literals.
struct Expr {
  enum class Kind : uint8_t { Lit, True, False, Not, And, Or, Iff, Ite };
  Kind kind = Kind::True;
  Literal lit;
  std::vector<std::shared_ptr<const Expr>> kids;
};
using ExprPtr = std::shared_ptr<const Expr>;

struct Assertion {
  uint32_t id = 0;
  ExprPtr expr;
  size_t begin = 0, end = 0;  // byte span of the assert command in the source
  size_t line = 0;
};

struct AssertionSet {
  std::shared_ptr<Context> ctx;
  std::vector<Assertion> assertions;
  std::string logic;  // as given by set-logic, may be empty
  std::vector<std::string> warnings;
  std::string source;
};

AssertionSet parse(std::string source);
AssertionSet parse_file(const std::string& path);

struct CnfOptions {
  /// Largest per-assertion clause count produced by distribution before the
  /// definitional translation takes over.
  size_t max_distributed = 8;
  bool force_definitional = false;
};

/// Clause i has origin Original(i, assertion id).
Formula cnf_convert(const AssertionSet& set, CnfOptions options = {});

/// The source with only the listed assertions kept, in their original order.
std::string write_subset(const AssertionSet& set, std::span<const uint32_t> assertion_ids);

// ---------------------------------------------------------------------------
// DIMACS

struct DimacsDocument {
  size_t num_vars = 0;
  std::vector<sat::BoolClause> clauses;
};

std::string write_dimacs(const DimacsDocument& doc);
/// Abstraction of `clauses` with every variable of the atom table declared.
DimacsDocument to_dimacs(std::span<const sat::BoolClause> clauses, const AtomTable& table);
DimacsDocument read_dimacs(std::string_view text);

enum class CoreMode : uint8_t { IndexList, DimacsSubset };

/// 0-based indices into `original`, ascending.
std::vector<uint32_t> read_core(std::string_view text, const DimacsDocument& original, CoreMode mode);
std::string write_index_list(std::span<const uint32_t> indices);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace lemlift::frontend
