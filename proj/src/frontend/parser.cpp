#include <fstream>
#include <map>
#include <sstream>

#include "lemlift/frontend.hpp"

namespace lemlift::frontend {

namespace {

struct SExpr {
  bool is_atom = true;
  std::string text;
  std::vector<SExpr> list;
  size_t line = 1, column = 1, begin = 0, end = 0;
};

class Reader {
 public:
  explicit Reader(std::string_view src) : src_(src) {}

  std::optional<SExpr> next() {
    skip();
    if (pos_ >= src_.size()) return std::nullopt;
    return read();
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, col_, msg); }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    SExpr e;
    e.line = line_;
    e.column = col_;
    e.begin = pos_;
    char c = src_[pos_];
    if (c == ')') fail("unexpected ')'");
    if (c == '(') {
      e.is_atom = false;
      advance();
      for (;;) {
        skip();
        if (pos_ >= src_.size()) throw ParseError(e.line, e.column, "unterminated '('");
        if (src_[pos_] == ')') {
          advance();
          break;
        }
        e.list.push_back(read());
      }
    } else if (c == '|' || c == '"') {
      advance();
      while (pos_ < src_.size() && src_[pos_] != c) {
        e.text += src_[pos_];
        advance();
      }
      if (pos_ >= src_.size()) throw ParseError(e.line, e.column, "unterminated quoted token");
      advance();
      if (c == '"') e.text = "\"" + e.text + "\"";
    } else {
      while (pos_ < src_.size()) {
        char d = src_[pos_];
        if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';' || d == '|' || d == '"') break;
        e.text += d;
        advance();
      }
    }
    e.end = pos_;
    return e;
  }

  std::string_view src_;
  size_t pos_ = 0, line_ = 1, col_ = 1;
};

[[noreturn]] void fail(const SExpr& at, const std::string& msg) { throw ParseError(at.line, at.column, msg); }

ExprPtr make(Expr::Kind k, std::vector<ExprPtr> kids = {}) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->kids = std::move(kids);
  return e;
}

ExprPtr make_lit(Literal l) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Lit;
  e->lit = l;
  return e;
}

ExprPtr from(const Context::LitOrConst& r) {
  if (const auto* l = std::get_if<Literal>(&r)) return make_lit(*l);
  return make(std::get<bool>(r) ? Expr::Kind::True : Expr::Kind::False);
}

std::optional<Rational> parse_number(const std::string& s) {
  if (s.empty() || !std::isdigit(static_cast<unsigned char>(s[0]))) return std::nullopt;
  size_t dot = s.find('.');
  std::string digits = s;
  Rational scale = 1;
  if (dot != std::string::npos) {
    digits = s.substr(0, dot) + s.substr(dot + 1);
    for (size_t i = dot + 1; i < s.size(); ++i) scale *= 10;
  }
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  }
  mpz_class n(digits, 10);
  return Rational(n) / scale;
}

class Parser {
 public:
  explicit Parser(AssertionSet& out) : out_(out) {}

  void command(const SExpr& cmd) {
    if (cmd.is_atom || cmd.list.empty() || !cmd.list[0].is_atom) fail(cmd, "expected a command");
    const std::string& head = cmd.list[0].text;
    if (head == "set-logic") {
      expect_args(cmd, 1);
      set_logic(cmd.list[1]);
    } else if (head == "set-info" || head == "set-option" || head == "get-info" || head == "get-model" ||
               head == "get-unsat-core" || head == "check-sat" || head == "exit" || head == "get-value") {
      // no effect on the assertion set
    } else if (head == "declare-sort") {
      if (cmd.list.size() < 2 || cmd.list.size() > 3 || !cmd.list[1].is_atom) fail(cmd, "malformed declare-sort");
      if (cmd.list.size() == 3 && cmd.list[2].text != "0") fail(cmd.list[2], "only sorts of arity 0 are supported");
      if (cmd.list[1].text == Context::kPredicateSort) fail(cmd.list[1], "reserved sort name: " + cmd.list[1].text);
      wrap(cmd, [&] { out_.ctx->declare_sort(cmd.list[1].text); });
    } else if (head == "declare-fun") {
      expect_args(cmd, 3);
      if (cmd.list[2].is_atom) fail(cmd.list[2], "expected an argument sort list");
      std::vector<Sort> args;
      for (const auto& s : cmd.list[2].list) args.push_back(sort(s));
      declare(cmd, cmd.list[1], std::move(args), sort(cmd.list[3]));
    } else if (head == "declare-const") {
      expect_args(cmd, 2);
      declare(cmd, cmd.list[1], {}, sort(cmd.list[2]));
    } else if (head == "assert") {
      expect_args(cmd, 1);
      Assertion a;
      a.id = static_cast<uint32_t>(out_.assertions.size());
      a.expr = boolean(cmd.list[1]);
      a.begin = cmd.begin;
      a.end = cmd.end;
      a.line = cmd.line;
      out_.assertions.push_back(std::move(a));
    } else if (head == "push" || head == "pop" || head == "define-fun" || head == "define-sort") {
      fail(cmd, "unsupported command: " + head);
    } else {
      fail(cmd, "unknown command: " + head);
    }
  }

 private:
  struct Value {
    enum class Kind : uint8_t { Bool, Real, Term } kind = Kind::Bool;
    ExprPtr b;
    LinearExpr r;
    TermId t = 0;
  };

  template <typename F>
  void wrap(const SExpr& at, F&& f) {
    try {
      f();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(at, e.what());
    }
  }

  void expect_args(const SExpr& cmd, size_t n) {
    if (cmd.list.size() != n + 1) fail(cmd, cmd.list[0].text + " expects " + std::to_string(n) + " argument(s)");
  }

  void set_logic(const SExpr& s) {
    if (!s.is_atom) fail(s, "expected a logic name");
    if (s.text != "QF_UF" && s.text != "QF_LRA" && s.text != "QF_LIA") fail(s, "unsupported logic: " + s.text);
    if (s.text == "QF_LIA") {
      out_.warnings.push_back("QF_LIA is interpreted over the rationals; integer-only unsatisfiability is not detected");
    }
    out_.logic = s.text;
  }

  Sort sort(const SExpr& s) {
    if (!s.is_atom) fail(s, "parametric sorts are not supported");
    if (s.text == "Bool") return Sort::boolean();
    if (s.text == "Real") return Sort::real();
    if (s.text == "Int") {
      if (out_.logic != "QF_LIA") fail(s, "sort Int is only accepted under QF_LIA");
      return Sort::real();
    }
    if (!out_.ctx->has_sort(s.text)) fail(s, "unknown sort: " + s.text);
    return Sort::uninterpreted(s.text);
  }

  void declare(const SExpr& cmd, const SExpr& name, std::vector<Sort> args, Sort result) {
    if (!name.is_atom) fail(name, "expected a symbol name");
    wrap(cmd, [&] { out_.ctx->declare_fun(name.text, std::move(args), std::move(result)); });
  }

  ExprPtr boolean(const SExpr& s) {
    auto v = eval(s);
    if (v.kind != Value::Kind::Bool) fail(s, "expected a Boolean term");
    return v.b;
  }

  LinearExpr real(const SExpr& s) {
    auto v = eval(s);
    if (v.kind != Value::Kind::Real) fail(s, "expected an arithmetic term");
    return v.r;
  }

  static Value of_bool(ExprPtr e) { return {Value::Kind::Bool, std::move(e), {}, 0}; }
  static Value of_real(LinearExpr r) { return {Value::Kind::Real, nullptr, std::move(r), 0}; }
  static Value of_term(TermId t) { return {Value::Kind::Term, nullptr, {}, t}; }

  Value symbol(const SExpr& s) {
    if (s.text == "true") return of_bool(make(Expr::Kind::True));
    if (s.text == "false") return of_bool(make(Expr::Kind::False));
    if (auto n = parse_number(s.text)) return of_real(LinearExpr::constant_of(*n));
    auto& ctx = *out_.ctx;
    auto id = ctx.find_symbol(s.text);
    if (!id || s.text == "true!") fail(s, "undeclared symbol: " + s.text);
    const auto& sym = ctx.symbol(*id);
    if (!sym.args.empty()) fail(s, "function " + s.text + " expects " + std::to_string(sym.args.size()) + " argument(s)");
    if (sym.result.kind == SortKind::Bool) return of_bool(make_lit(ctx.mk_bool(s.text)));
    TermId t = ctx.app(*id, {});
    if (sym.result.kind == SortKind::Real) return of_real(LinearExpr::variable(t));
    return of_term(t);
  }

  Value eval(const SExpr& s) {
    if (s.is_atom) return symbol(s);
    if (s.list.empty()) fail(s, "empty application");
    if (!s.list[0].is_atom) fail(s.list[0], "expected an operator");
    const std::string& op = s.list[0].text;
    std::vector<SExpr> args(s.list.begin() + 1, s.list.end());
    auto bools = [&](size_t min) {
      if (args.size() < min) fail(s, op + " expects at least " + std::to_string(min) + " argument(s)");
      std::vector<ExprPtr> kids;
      for (const auto& a : args) kids.push_back(boolean(a));
      return kids;
    };
    if (op == "not") {
      if (args.size() != 1) fail(s, "not expects 1 argument");
      return of_bool(make(Expr::Kind::Not, bools(1)));
    }
    if (op == "and") return of_bool(make(Expr::Kind::And, bools(1)));
    if (op == "or") return of_bool(make(Expr::Kind::Or, bools(1)));
    if (op == "=>") {
      auto kids = bools(2);
      // right associative: a => (b => c)
      ExprPtr acc = kids.back();
      for (size_t i = kids.size() - 1; i-- > 0;) acc = make(Expr::Kind::Or, {make(Expr::Kind::Not, {kids[i]}), acc});
      return of_bool(acc);
    }
    if (op == "xor") {
      auto kids = bools(2);
      ExprPtr acc = kids[0];
      for (size_t i = 1; i < kids.size(); ++i) acc = make(Expr::Kind::Not, {make(Expr::Kind::Iff, {acc, kids[i]})});
      return of_bool(acc);
    }
    if (op == "ite") {
      if (args.size() != 3) fail(s, "ite expects 3 arguments");
      auto c = boolean(args[0]);
      auto a = eval(args[1]);
      auto b = eval(args[2]);
      if (a.kind != Value::Kind::Bool || b.kind != Value::Kind::Bool) fail(s, "ite is only supported over Bool");
      return of_bool(make(Expr::Kind::Ite, {c, a.b, b.b}));
    }
    if (op == "=" || op == "distinct") {
      if (args.size() < 2) fail(s, op + " expects at least 2 arguments");
      std::vector<Value> vals;
      for (const auto& a : args) vals.push_back(eval(a));
      std::vector<ExprPtr> parts;
      for (size_t i = 0; i < vals.size(); ++i) {
        for (size_t j = i + 1; j < vals.size(); ++j) {
          if (op == "=" && j != i + 1) continue;
          auto eq = equal(s, vals[i], vals[j]);
          parts.push_back(op == "=" ? eq : make(Expr::Kind::Not, {eq}));
        }
      }
      return of_bool(parts.size() == 1 ? parts[0] : make(Expr::Kind::And, parts));
    }
    if (op == "<=" || op == "<" || op == ">=" || op == ">") {
      if (args.size() < 2) fail(s, op + " expects at least 2 arguments");
      RelOp rel = op == "<=" ? RelOp::Le : op == "<" ? RelOp::Lt : op == ">=" ? RelOp::Ge : RelOp::Gt;
      std::vector<LinearExpr> vals;
      for (const auto& a : args) vals.push_back(real(a));
      std::vector<ExprPtr> parts;
      for (size_t i = 0; i + 1 < vals.size(); ++i) parts.push_back(from(out_.ctx->mk_linear(vals[i], rel, vals[i + 1])));
      return of_bool(parts.size() == 1 ? parts[0] : make(Expr::Kind::And, parts));
    }
    if (op == "+") {
      LinearExpr sum;
      for (const auto& a : args) sum += real(a);
      return of_real(sum);
    }
    if (op == "-") {
      if (args.empty()) fail(s, "- expects at least 1 argument");
      LinearExpr acc = real(args[0]);
      if (args.size() == 1) {
        acc *= Rational(-1);
        return of_real(acc);
      }
      for (size_t i = 1; i < args.size(); ++i) acc -= real(args[i]);
      return of_real(acc);
    }
    if (op == "*") {
      LinearExpr acc = LinearExpr::constant_of(1);
      for (const auto& a : args) {
        LinearExpr v = real(a);
        if (v.is_constant()) {
          acc *= v.constant;
        } else if (acc.is_constant()) {
          Rational k = acc.constant;
          acc = v;
          acc *= k;
        } else {
          fail(a, "nonlinear multiplication");
        }
      }
      return of_real(acc);
    }
    if (op == "/") {
      if (args.size() != 2) fail(s, "/ expects 2 arguments");
      LinearExpr n = real(args[0]);
      LinearExpr d = real(args[1]);
      if (!d.is_constant() || d.constant == 0) fail(args[1], "division only by a nonzero constant");
      n *= Rational(1) / d.constant;
      return of_real(n);
    }
    if (op == "!") {
      if (args.empty()) fail(s, "! expects a term");
      return eval(args[0]);
    }
    if (op == "let") fail(s, "let is not supported");
    return application(s, op, args);
  }

  ExprPtr equal(const SExpr& at, const Value& a, const Value& b) {
    if (a.kind != b.kind) fail(at, "= over terms of different sorts");
    switch (a.kind) {
      case Value::Kind::Bool:
        return make(Expr::Kind::Iff, {a.b, b.b});
      case Value::Kind::Real:
        return from(out_.ctx->mk_linear(a.r, RelOp::Eq, b.r));
      case Value::Kind::Term: {
        if (!(out_.ctx->term(a.t).sort == out_.ctx->term(b.t).sort)) fail(at, "= over terms of different sorts");
        ExprPtr r;
        wrap(at, [&] { r = from(out_.ctx->mk_eq(a.t, b.t)); });
        return r;
      }
    }
    fail(at, "bad equality");
  }

  Value application(const SExpr& s, const std::string& name, const std::vector<SExpr>& args) {
    auto& ctx = *out_.ctx;
    auto id = ctx.find_symbol(name);
    if (!id || name == "true!") fail(s.list[0], "undeclared symbol: " + name);
    const auto& sym = ctx.symbol(*id);
    if (sym.args.size() != args.size()) {
      fail(s, "function " + name + " expects " + std::to_string(sym.args.size()) + " argument(s), got " +
                  std::to_string(args.size()));
    }
    std::vector<TermId> terms;
    for (size_t i = 0; i < args.size(); ++i) {
      auto v = eval(args[i]);
      if (v.kind != Value::Kind::Term || !(ctx.term(v.t).sort == sym.args[i])) {
        fail(args[i], "argument " + std::to_string(i + 1) + " of " + name + " has the wrong sort");
      }
      terms.push_back(v.t);
    }
    TermId t = ctx.app(*id, std::move(terms));
    if (sym.result.kind == SortKind::Bool) return of_bool(make_lit(ctx.mk_predicate(t)));
    return of_term(t);
  }

  AssertionSet& out_;
};

}  // namespace

AssertionSet parse(std::string source) {
  AssertionSet out;
  out.ctx = std::make_shared<Context>();
  out.source = std::move(source);
  Reader reader(out.source);
  Parser parser(out);
  while (auto cmd = reader.next()) parser.command(*cmd);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("cannot write " + path);
}

AssertionSet parse_file(const std::string& path) { return parse(read_text_file(path)); }

std::string write_subset(const AssertionSet& set, std::span<const uint32_t> assertion_ids) {
  std::vector<bool> keep(set.assertions.size());
  for (auto id : assertion_ids) {
    if (id >= keep.size()) throw Error("assertion id out of range: " + std::to_string(id));
    keep[id] = true;
  }
  std::string out;
  size_t pos = 0;
  for (const auto& a : set.assertions) {
    if (keep[a.id]) continue;
    out.append(set.source, pos, a.begin - pos);
    pos = a.end;
    // drop the rest of the line when it held only the removed command
    size_t eol = set.source.find('\n', pos);
    size_t stop = eol == std::string::npos ? set.source.size() : eol + 1;
    bool blank = true;
    for (size_t i = pos; i < stop; ++i) blank = blank && std::isspace(static_cast<unsigned char>(set.source[i]));
    size_t bol = out.find_last_of('\n');
    bool line_start = true;
    for (size_t i = bol == std::string::npos ? 0 : bol + 1; i < out.size(); ++i) {
      line_start = line_start && std::isspace(static_cast<unsigned char>(out[i]));
    }
    if (blank && line_start) {
      out.erase(bol == std::string::npos ? 0 : bol + 1);
      pos = stop;
    }
  }
  out.append(set.source, pos);
  return out;
}

}  // namespace lemlift::frontend
