#include <gtest/gtest.h>

#include <functional>

#include "gsql/checker.hpp"
#include "gsql/lexer.hpp"
#include "gsql/parser.hpp"
#include "gsql/printer.hpp"
#include "support.hpp"

namespace gsql {
namespace {

using testing::fixture_path;
using testing::read_text;

std::vector<Tok> kinds(std::string_view text) {
  std::vector<Tok> out;
  for (const auto& t : tokenize(text)) out.push_back(t.kind);
  return out;
}

// ---- lexer ----

TEST(Lexer, AccumulatorTokens) {
  auto toks = tokenize("@@total += v.@score' ;");
  ASSERT_EQ(toks.size(), 7u);
  EXPECT_EQ(toks[0].kind, Tok::GlobalAcc);
  EXPECT_EQ(toks[0].text, "total");
  EXPECT_EQ(toks[1].kind, Tok::PlusAssign);
  EXPECT_EQ(toks[2].kind, Tok::Ident);
  EXPECT_EQ(toks[3].kind, Tok::Dot);
  EXPECT_EQ(toks[4].kind, Tok::VertexAcc);
  EXPECT_EQ(toks[4].text, "score");
  EXPECT_TRUE(toks[4].primed);
  EXPECT_EQ(toks[5].kind, Tok::Semi);
  EXPECT_EQ(toks[6].kind, Tok::End);
}

TEST(Lexer, KeywordsAreCaseInsensitive) {
  auto toks = tokenize("select Select FROM foo");
  EXPECT_EQ(toks[0].kind, Tok::Keyword);
  EXPECT_EQ(toks[0].text, "SELECT");
  EXPECT_EQ(toks[1].text, "SELECT");
  EXPECT_EQ(toks[3].kind, Tok::Ident);
  EXPECT_EQ(toks[3].text, "foo");
}

TEST(Lexer, NumbersAndRanges) {
  EXPECT_EQ(kinds("2..3"), (std::vector<Tok>{Tok::Int, Tok::DotDot, Tok::Int, Tok::End}));
  EXPECT_EQ(kinds("2.5 1e3 7"), (std::vector<Tok>{Tok::Float, Tok::Float, Tok::Int, Tok::End}));
  EXPECT_THROW(tokenize("12abc"), Error);
}

TEST(Lexer, DarpeSymbols) {
  EXPECT_EQ(kinds("-(E>.<F*1..2)-"),
            (std::vector<Tok>{Tok::Minus, Tok::LParen, Tok::Ident, Tok::Gt, Tok::Dot, Tok::Lt,
                              Tok::Ident, Tok::Star, Tok::Int, Tok::DotDot, Tok::Int, Tok::RParen,
                              Tok::Minus, Tok::End}));
}

TEST(Lexer, StringsAndComments) {
  auto toks = tokenize("'it''s' // line\n /* block\n */ \"a\\tb\"");
  ASSERT_EQ(toks.size(), 3u);
  EXPECT_EQ(toks[0].text, "it's");
  EXPECT_EQ(toks[1].text, "a\tb");
  EXPECT_EQ(toks[1].pos.line, 3);
  EXPECT_THROW(tokenize("'open"), Error);
  EXPECT_THROW(tokenize("/* open"), Error);
  EXPECT_THROW(tokenize("a # b"), Error);
}

TEST(Lexer, PostAccumSpellings) {
  auto a = tokenize("POST-ACCUM");
  auto b = tokenize("post_accum");
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].kind, Tok::Keyword);
  EXPECT_EQ(a[0].text, "POST_ACCUM");
  EXPECT_EQ(b[0].text, "POST_ACCUM");
  // Subtraction stays subtraction.
  EXPECT_EQ(kinds("post - accumx").size(), 4u);
}

TEST(Lexer, Positions) {
  auto toks = tokenize("a\n  bb");
  EXPECT_EQ(toks[1].pos.line, 2);
  EXPECT_EQ(toks[1].pos.column, 3);
}

// ---- parser ----

TEST(Parser, DarpeStructure) {
  DarpePtr d = parse_darpe("E>.(F>|<G)*.<H.J");
  ASSERT_EQ(d->kind, Darpe::Kind::Concat);
  // Concatenation is flattened or nested; collect the leaves in order.
  std::vector<const Darpe*> leaves;
  std::function<void(const Darpe&)> walk = [&](const Darpe& n) {
    if (n.kind == Darpe::Kind::Concat) {
      for (const auto& k : n.kids) walk(*k);
    } else {
      leaves.push_back(&n);
    }
  };
  walk(*d);
  ASSERT_EQ(leaves.size(), 4u);
  EXPECT_EQ(leaves[0]->edge_type, "E");
  EXPECT_EQ(leaves[0]->dir, Adorn::Forward);
  EXPECT_EQ(leaves[1]->kind, Darpe::Kind::Star);
  EXPECT_FALSE(leaves[1]->has_bounds);
  const Darpe& alt = *leaves[1]->kids[0];
  ASSERT_EQ(alt.kind, Darpe::Kind::Alt);
  EXPECT_EQ(alt.kids[1]->edge_type, "G");
  EXPECT_EQ(alt.kids[1]->dir, Adorn::Backward);
  EXPECT_EQ(leaves[2]->dir, Adorn::Backward);
  EXPECT_EQ(leaves[3]->edge_type, "J");
  EXPECT_EQ(leaves[3]->dir, Adorn::None);
}

TEST(Parser, DarpeBounds) {
  DarpePtr d = parse_darpe("E>*2..3");
  ASSERT_EQ(d->kind, Darpe::Kind::Star);
  EXPECT_TRUE(d->has_bounds);
  EXPECT_EQ(d->lo, 2);
  EXPECT_EQ(d->hi, 3);
  DarpePtr open = parse_darpe("E>*2..");
  EXPECT_EQ(open->lo, 2);
  EXPECT_FALSE(open->hi.has_value());
  DarpePtr upto = parse_darpe("_*..4");
  EXPECT_FALSE(upto->lo.has_value());
  EXPECT_EQ(upto->hi, 4);
}

TEST(Parser, MultiOutputHasTwoTables) {
  Program p = parse_program(read_text(fixture_path("corpus/multi_output.gsql")));
  ASSERT_EQ(p.queries.size(), 1u);
  const Query& q = *p.queries[0];
  EXPECT_EQ(q.form, QueryForm::With);
  // Declarations, then the block.
  ASSERT_EQ(q.body.size(), 2u);
  EXPECT_EQ(q.body[0]->kind, StmtKind::Decl);
  ASSERT_EQ(q.body[1]->kind, StmtKind::Block);
  const QueryBlock& b = *q.body[1]->block;
  ASSERT_EQ(b.outputs.size(), 2u);
  EXPECT_EQ(b.outputs[0].into, "PerCust");
  EXPECT_EQ(b.outputs[1].into, "PerToy");
  EXPECT_EQ(b.outputs[1].cols.size(), 2u);
  EXPECT_TRUE(b.has_accum);
  EXPECT_EQ(b.accum.size(), 3u);
}

TEST(Parser, QueryForms) {
  EXPECT_EQ(parse_query("CREATE QUERY q() FOR GRAPH G { }")->form, QueryForm::Create);
  EXPECT_EQ(parse_query("SELECT v FROM G AS V: v")->form, QueryForm::Bare);
  EXPECT_EQ(parse_query("WITH SumAccum<int> @@n BEGIN @@n += 1; END")->form, QueryForm::With);
}

TEST(Parser, ErrorsHavePositions) {
  try {
    parse_program("CREATE QUERY q() {\n  SELECT FROM ;\n}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_EQ(e.pos().line, 2);
  }
}

TEST(Parser, PostAccumBothSpellingsSameTree) {
  const char* a = "SELECT v FROM G AS V: v POST-ACCUM v.@x += 1";
  const char* b = "SELECT v FROM G AS V: v POST_ACCUM v.@x += 1";
  EXPECT_EQ(ast_json(*parse_query(a)), ast_json(*parse_query(b)));
}

// ---- printer round trip ----

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const char* f : {"ddl.gsql", "schema.gsql", "seamless.gsql", "cross_graph.gsql",
                        "multi_aggregating.gsql", "multi_output.gsql", "recommender.gsql",
                        "pagerank.gsql"})
    out.push_back(fixture_path(std::string("corpus/") + f));
  for (const char* f : {"bench_schema.gsql", "sales_schema.gsql", "pagerank.gsql", "khop.gsql",
                        "wcc.gsql", "recommender.gsql"})
    out.push_back(testing::shipped_query_path(f));
  return out;
}

TEST(Printer, CorpusRoundTrip) {
  for (const auto& path : corpus_files()) {
    Program p = parse_program(read_text(path));
    std::string printed = print_program(p);
    Program again = parse_program(printed);
    EXPECT_EQ(ast_json(p), ast_json(again)) << path;
    // Printing is a fixed point after one pass.
    EXPECT_EQ(print_program(again), printed) << path;
  }
}

TEST(Printer, ExpressionsKeepStructure) {
  for (const char* text : {"1 + 2 * 3", "(1 + 2) * 3", "a - (b - c)", "NOT x AND y OR z",
                           "CASE WHEN a > 1 THEN 'x' ELSE 'y' END", "-x.@s' / 2.5",
                           "log(1 + @@n)", "s NOT LIKE 'a%'", "t.text CONTAINS e.company",
                           "[1, 2] + (3, 4)"}) {
    ExprPtr e;
    try {
      e = parse_expression(text);
    } catch (const Error& err) {
      ADD_FAILURE() << text << ": " << err.what();
      continue;
    }
    ExprPtr again = parse_expression(print_expr(*e));
    EXPECT_EQ(ast_json(*e), ast_json(*again)) << text;
  }
}

TEST(Printer, PrecedenceInTree) {
  EXPECT_NE(ast_json(*parse_expression("1 + 2 * 3")), ast_json(*parse_expression("(1 + 2) * 3")));
  EXPECT_EQ(ast_json(*parse_expression("1 + 2 * 3")), ast_json(*parse_expression("1 + (2 * 3)")));
}

// ---- checker ----

class Checker : public ::testing::Test {
 protected:
  void SetUp() override {
    session_.run_source(read_text(fixture_path("corpus/schema.gsql")));
    session_.load_table(fixture_path("corpus/employees.csv"), "Employee");
  }

  CheckedQuery check(std::string_view text) { return check_query(parse_query(text), session_.check_env()); }

  std::string semantic_error(std::string_view text) {
    try {
      check(text);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Semantic) << e.what();
      return e.message();
    }
    ADD_FAILURE() << "accepted: " << text;
    return "";
  }

  Session session_;
};

TEST_F(Checker, CorpusQueriesCheck) {
  for (const char* f : {"seamless.gsql", "cross_graph.gsql", "multi_aggregating.gsql",
                        "multi_output.gsql", "recommender.gsql", "pagerank.gsql"}) {
    Program p = parse_program(read_text(fixture_path(std::string("corpus/") + f)));
    for (auto& q : p.queries) EXPECT_NO_THROW(check_query(std::move(q), session_.check_env())) << f;
  }
}

TEST_F(Checker, EdgeVariableOnVariableLengthHop) {
  std::string msg = semantic_error(
      "CREATE QUERY q() FOR GRAPH Twitter { "
      "S = SELECT b FROM User: a -(Follows>*: e)- User: b; }");
  EXPECT_NE(msg.find("e"), std::string::npos);
  EXPECT_NO_THROW(check("CREATE QUERY q() FOR GRAPH Twitter { "
                        "S = SELECT b FROM User: a -(Follows>: e)- User: b; }"));
}

TEST_F(Checker, UndeclaredAccumulator) {
  std::string msg = semantic_error(
      "CREATE QUERY q() FOR GRAPH Twitter { "
      "S = SELECT u FROM User: u ACCUM u.@foo += 1; }");
  EXPECT_NE(msg.find("@foo"), std::string::npos);
  semantic_error("CREATE QUERY q() FOR GRAPH Twitter { @@bar += 1; }");
}

TEST_F(Checker, UnsupportedAccumulators) {
  for (const char* decl : {"ArrayAccum<SumAccum<int>> @@a[3];", "GroupByAccum<int k, SumAccum<int> s> @@a;",
                           "BitwiseOrAccum @@a;", "BitwiseAndAccum @@a;"}) {
    std::string text = std::string("CREATE QUERY q() FOR GRAPH Twitter { ") + decl + " }";
    EXPECT_ANY_THROW(check(text)) << decl;
  }
}

TEST_F(Checker, UnknownNames) {
  semantic_error("CREATE QUERY q() FOR GRAPH Nope { }");
  semantic_error("CREATE QUERY q() FOR GRAPH Twitter { S = SELECT u FROM Nobody: u; }");
  semantic_error(
      "CREATE QUERY q() FOR GRAPH Twitter { S = SELECT u FROM User: u -(Nope>)- User: w; }");
  semantic_error("CREATE QUERY q() FOR GRAPH Twitter { S = SELECT u FROM User: u WHERE u.age > 3; }");
  semantic_error("CREATE QUERY q() FOR GRAPH Twitter { x = y + 1; }");
}

TEST_F(Checker, TypeErrors) {
  semantic_error("CREATE QUERY q() FOR GRAPH Twitter { SumAccum<int> @@n; @@n += 'text'; }");
  semantic_error(
      "CREATE QUERY q() FOR GRAPH Twitter { SumAccum<int> @@n; IF 'x' THEN @@n += 1; END; }");
}

TEST_F(Checker, EdgeTypeOutsideGraph) {
  // Posts is not part of LinkedIn.
  semantic_error(
      "CREATE QUERY q() FOR GRAPH LinkedIn { S = SELECT p FROM Person: p -(Posts>)- Tweet: t; }");
}

TEST_F(Checker, PlanSlots) {
  CheckedQuery c = check(read_text(testing::shipped_query_path("pagerank.gsql")));
  EXPECT_GE(c.plan->find_slot("@score"), 0);
  EXPECT_GE(c.plan->find_slot("@@maxDifference"), 0);
  EXPECT_EQ(c.plan->find_slot("@nothing"), -1);
  EXPECT_EQ(c.plan->param_slots.size(), 3u);
}

}  // namespace
}  // namespace gsql
