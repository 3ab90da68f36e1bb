#include <gtest/gtest.h>

#include <random>
#include <set>

#include "bool_oracle.hpp"
#include "lemlift/frontend.hpp"
#include "lemlift/sat.hpp"
#include "running_examples.hpp"

using namespace lemlift;
using namespace lemlift::frontend;

namespace {

std::string data(const std::string& name) { return std::string(LEMLIFT_TEST_DATA) + "/" + name; }

std::vector<std::string> clause_texts(const Formula& f) {
  std::vector<std::string> out;
  for (const auto& c : f.clauses()) {
    std::string s;
    for (auto l : c.lits) s += f.context().literal_to_string(l) + " ";
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST(Parse, RunningExampleMatchesDirectConstruction) {
  auto set = parse_file(data("example1.smt2"));
  ASSERT_EQ(set.assertions.size(), 9u);
  auto f = cnf_convert(set);
  auto expected = lemlift::testing::example1();
  ASSERT_EQ(f.size(), 9u);
  ASSERT_EQ(f.context().atoms().size(), expected.context().atoms().size());
  for (AtomId a = 0; a < f.context().atoms().size(); ++a) {
    EXPECT_EQ(f.context().atom_to_string(a), expected.context().atom_to_string(a));
  }
  EXPECT_EQ(clause_texts(f), clause_texts(expected));
  for (uint32_t i = 0; i < f.size(); ++i) {
    EXPECT_EQ(f.clause(i).origin.index, i);
    EXPECT_EQ(f.clause(i).origin.assertion, i);
    EXPECT_EQ(f.clause(i).lits, expected.clause(i).lits);
  }
  EXPECT_EQ(f.logic(), Logic::Lra);
}

TEST(Parse, SingleStrictUnit) {
  auto set = parse("(declare-fun y () Real)\n(assert (< y 0))\n");
  ASSERT_EQ(set.assertions.size(), 1u);
  auto f = cnf_convert(set);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f.clause(0).lits.size(), 1u);
  EXPECT_EQ(f.context().atoms().size(), 1u);
}

TEST(Parse, UndeclaredSymbolReportsPosition) {
  try {
    parse("(declare-fun y () Real)\n(assert (< y z))\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2u);
    EXPECT_EQ(e.column, 14u);
    EXPECT_NE(std::string(e.what()).find("undeclared symbol: z"), std::string::npos);
  }
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse("(set-logic QF_BV)"), ParseError);
  EXPECT_THROW(parse("(declare-sort U 0)(declare-fun f (U) U)(declare-fun a () U)(assert (= (f a a) a))"), ParseError);
  EXPECT_THROW(parse("(declare-fun x () Real)(assert (< (* x x) 1))"), ParseError);
  EXPECT_THROW(parse("(assert (< 1 2)"), ParseError);
  EXPECT_THROW(parse("(assert true))"), ParseError);
  EXPECT_THROW(parse("(push 1)"), ParseError);
  EXPECT_THROW(parse("(declare-fun x () Int)"), ParseError);
  EXPECT_THROW(parse("(declare-fun p () Bool)(declare-fun x () Real)(assert (= p x))"), ParseError);
  EXPECT_THROW(parse("(declare-sort Bool! 0)"), ParseError);
  EXPECT_THROW(parse("(declare-sort U 0)(declare-fun p (U) Bool)(declare-fun a () U)(assert (= a true!))"), ParseError);
}

TEST(Parse, IntegerLogicWarns) {
  auto set = parse("(set-logic QF_LIA)(declare-fun x () Int)(assert (> x 0))");
  ASSERT_EQ(set.warnings.size(), 1u);
  EXPECT_NE(set.warnings[0].find("rationals"), std::string::npos);
}

TEST(Parse, ArithmeticSugar) {
  auto set = parse(
      "(declare-fun x () Real)(declare-fun y () Real)"
      "(assert (<= (* 2 x) 2))(assert (<= x 1))(assert (>= (- (/ x 2)) 0.5))(assert (< 0 x y))");
  auto f = cnf_convert(set);
  // 2x <= 2 and x <= 1 intern to one atom
  EXPECT_EQ(f.clause(0).lits, f.clause(1).lits);
  EXPECT_EQ(f.size(), 5u);
}

TEST(Parse, UninterpretedAndPredicates) {
  auto set = parse_file(data("euf_chain.smt2"));
  auto f = cnf_convert(set);
  EXPECT_EQ(f.logic(), Logic::Euf);
  EXPECT_EQ(f.size(), 6u);
}

TEST(Cnf, NestedDisjunctionDistributes) {
  auto set = parse("(declare-fun a () Bool)(declare-fun b () Bool)(declare-fun c () Bool)(assert (or a (and b c)))");
  auto f = cnf_convert(set);
  EXPECT_EQ(f.size(), 2u);
  EXPECT_EQ(f.context().atoms().size(), 3u);
}

TEST(Cnf, DefinitionalTranslation) {
  auto set = parse("(declare-fun a () Bool)(declare-fun b () Bool)(declare-fun c () Bool)(assert (or a (and b c)))");
  CnfOptions o;
  o.force_definitional = true;
  auto f = cnf_convert(set, o);
  ASSERT_EQ(f.context().atoms().size(), 4u);  // one auxiliary
  ASSERT_EQ(f.size(), 4u);                    // three defining clauses, one linking clause
  // For each assignment of a, b, c: the input holds iff some aux value
  // satisfies the clauses.
  std::vector<sat::BoolClause> cnf;
  for (const auto& c : f.clauses()) cnf.push_back(t2p(c));
  for (int bits = 0; bits < 8; ++bits) {
    bool a = bits & 1, b = bits & 2, c = bits & 4;
    bool want = a || (b && c);
    bool got = false;
    for (int aux = 0; aux < 2; ++aux) {
      std::vector<bool> model{a, b, c, aux == 1};
      bool all = true;
      for (const auto& cl : cnf) all = all && lemlift::testing::satisfies(model, cl);
      got = got || all;
    }
    EXPECT_EQ(got, want) << bits;
  }
}

TEST(Cnf, LargeAssertionUsesAuxiliaries) {
  std::string src;
  for (int i = 0; i < 8; ++i) src += "(declare-fun p" + std::to_string(i) + " () Bool)";
  src += "(assert (or (and p0 p1) (and p2 p3) (and p4 p5) (and p6 p7)))";
  auto f = cnf_convert(parse(src));
  EXPECT_GT(f.context().atoms().size(), 8u);
  for (const auto& c : f.clauses()) EXPECT_EQ(c.origin.assertion, 0u);
}

// Random Boolean structure over four atoms, depth at most three: for every
// assignment to the original atoms, the assertion holds iff the CNF is
// satisfiable under it.
TEST(Cnf, RandomEquisatisfiable) {
  using K = Expr::Kind;
  for (uint64_t seed = 0; seed < 400; ++seed) {
    std::mt19937_64 rng(seed);
    auto ctx = std::make_shared<Context>();
    std::vector<Literal> atoms;
    for (int i = 0; i < 4; ++i) atoms.push_back(ctx->mk_bool("a" + std::to_string(i)));
    std::function<ExprPtr(int)> gen = [&](int depth) -> ExprPtr {
      auto e = std::make_shared<Expr>();
      int pick = depth == 0 ? 0 : std::uniform_int_distribution<int>(0, 5)(rng);
      static const K kinds[] = {K::Lit, K::Not, K::And, K::Or, K::Iff, K::Ite};
      e->kind = kinds[pick];
      if (e->kind == K::Lit) {
        e->lit = atoms[std::uniform_int_distribution<size_t>(0, 3)(rng)];
        return e;
      }
      size_t n = e->kind == K::Not ? 1 : e->kind == K::Iff ? 2 : e->kind == K::Ite ? 3 : 2 + rng() % 2;
      for (size_t i = 0; i < n; ++i) e->kids.push_back(gen(depth - 1));
      return e;
    };
    std::function<bool(const ExprPtr&, const std::vector<bool>&)> eval = [&](const ExprPtr& e, const auto& m) {
      switch (e->kind) {
        case K::Lit:
          return m[e->lit.atom] == e->lit.positive;
        case K::True:
          return true;
        case K::False:
          return false;
        case K::Not:
          return !eval(e->kids[0], m);
        case K::And:
          return std::all_of(e->kids.begin(), e->kids.end(), [&](const auto& k) { return eval(k, m); });
        case K::Or:
          return std::any_of(e->kids.begin(), e->kids.end(), [&](const auto& k) { return eval(k, m); });
        case K::Iff:
          return eval(e->kids[0], m) == eval(e->kids[1], m);
        case K::Ite:
          return eval(e->kids[0], m) ? eval(e->kids[1], m) : eval(e->kids[2], m);
      }
      return false;
    };
    AssertionSet set;
    set.ctx = ctx;
    set.assertions.push_back({0, gen(3), 0, 0, 0});
    set.assertions.push_back({1, gen(2), 0, 0, 0});
    for (bool force : {false, true}) {
      CnfOptions o;
      o.force_definitional = force;
      auto f = cnf_convert(set, o);
      for (const auto& c : f.clauses()) ASSERT_LT(c.origin.assertion, 2u);
      size_t n = f.context().atoms().size();
      std::vector<sat::BoolClause> cnf;
      for (const auto& c : f.clauses()) cnf.push_back(t2p(c));
      for (int bits = 0; bits < 16; ++bits) {
        std::vector<bool> m(4);
        for (int i = 0; i < 4; ++i) m[i] = (bits >> i) & 1;
        bool want = eval(set.assertions[0].expr, m) && eval(set.assertions[1].expr, m);
        auto fixed = cnf;
        for (int i = 0; i < 4; ++i) fixed.push_back({sat::Lit::make(i, !m[i])});
        auto verdict = sat::sat_solve(fixed, {}, {}, n);
        ASSERT_EQ(verdict.status == sat::Status::Sat, want) << "seed " << seed << " force " << force;
      }
    }
  }
}

TEST(Subset, KeepsChosenAssertions) {
  auto set = parse_file(data("example1.smt2"));
  std::vector<uint32_t> keep{0, 1, 2, 3, 5, 7};
  auto text = write_subset(set, keep);
  auto again = parse(text);
  ASSERT_EQ(again.assertions.size(), 6u);
  auto f = cnf_convert(again);
  auto g = cnf_convert(set).subset(keep);
  EXPECT_EQ(clause_texts(f), clause_texts(g));
  EXPECT_NE(text.find("(check-sat)"), std::string::npos);
}

TEST(Dimacs, LiftedRunningExampleHeader) {
  auto f = lemlift::testing::example1();
  std::vector<sat::BoolClause> cnf;
  for (const auto& c : f.clauses()) cnf.push_back(t2p(c));
  // the three lemmas: not(x=1) or not(x=0), not(y=2) or not(y<0), not(y=1) or not(y<0)
  cnf.push_back(lemlift::testing::dimacs_clause({-2, -1}));
  cnf.push_back(lemlift::testing::dimacs_clause({-9, 7}));
  cnf.push_back(lemlift::testing::dimacs_clause({-5, 7}));
  auto text = write_dimacs(to_dimacs(cnf, f.context().atoms()));
  EXPECT_EQ(text.substr(0, text.find('\n')), "p cnf 10 12");
  auto doc = read_dimacs(text);
  EXPECT_EQ(doc.num_vars, 10u);
  EXPECT_EQ(doc.clauses, cnf);
}

TEST(Dimacs, SmallDocuments) {
  EXPECT_EQ(write_dimacs({}), "p cnf 0 0\n");
  DimacsDocument unit{1, {lemlift::testing::dimacs_clause({1})}};
  EXPECT_EQ(write_dimacs(unit), "p cnf 1 1\n1 0\n");
}

TEST(Dimacs, RejectsMalformed) {
  EXPECT_THROW(read_dimacs("1 2 0\n"), Error);
  EXPECT_THROW(read_dimacs("p cnf 2 2\n1 2 0\n"), Error);
  EXPECT_THROW(read_dimacs("p cnf 2 1\n1 3 0\n"), Error);
  EXPECT_THROW(read_dimacs("p cnf 2 1\n1 2\n"), Error);
  EXPECT_THROW(read_dimacs("p cnf 2 1\n1 x 0\n"), Error);
  auto doc = read_dimacs("c comment\np cnf 2 2\n1 -2\n 0 2 0\n");
  EXPECT_EQ(doc.clauses.size(), 2u);
}

TEST(CoreFile, IndexList) {
  auto original = read_dimacs("p cnf 2 3\n1 0\n-1 0\n2 0\n");
  EXPECT_EQ(read_core("1\n3\n", original, CoreMode::IndexList), (std::vector<uint32_t>{0, 2}));
  EXPECT_THROW(read_core("0\n", original, CoreMode::IndexList), Error);
  EXPECT_THROW(read_core("4\n", original, CoreMode::IndexList), Error);
}

TEST(CoreFile, DimacsSubset) {
  auto original = read_dimacs("p cnf 2 3\n1 -2 0\n2 0\n1 -2 0\n");
  EXPECT_EQ(read_core(write_dimacs(original), original, CoreMode::DimacsSubset), (std::vector<uint32_t>{0, 1, 2}));
  EXPECT_EQ(read_core("p cnf 2 1\n-2 1 0\n", original, CoreMode::DimacsSubset), std::vector<uint32_t>{0});
  EXPECT_EQ(read_core("p cnf 2 2\n-2 1 0\n1 -2 0\n", original, CoreMode::DimacsSubset),
            (std::vector<uint32_t>{0, 2}));
  EXPECT_THROW(read_core("p cnf 2 1\n-1 0\n", original, CoreMode::DimacsSubset), Error);
}

TEST(CoreFile, RoundTripBothModes) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 200; ++round) {
    // distinct clauses: duplicates legitimately resolve to the lowest index
    std::vector<sat::BoolClause> clauses;
    std::set<sat::BoolClause> seen;
    for (auto& c : lemlift::testing::random_cnf(rng, 5, 12)) {
      if (seen.insert(sat::normalized(c)).second) clauses.push_back(std::move(c));
    }
    DimacsDocument doc{5, clauses};
    std::vector<uint32_t> chosen;
    for (uint32_t i = 0; i < clauses.size(); ++i) {
      if (rng() % 2) chosen.push_back(i);
    }
    EXPECT_EQ(read_core(write_index_list(chosen), doc, CoreMode::IndexList), chosen);
    DimacsDocument sub{5, {}};
    for (auto i : chosen) sub.clauses.push_back(clauses[i]);
    EXPECT_EQ(read_core(write_dimacs(sub), doc, CoreMode::DimacsSubset), chosen);
  }
}
