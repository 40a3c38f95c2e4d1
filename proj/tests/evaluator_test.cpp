#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "bench.hpp"
#include "gsql/evaluator.hpp"
#include "gsql/parser.hpp"
#include "gsql/render.hpp"
#include "support.hpp"

namespace gsql {
namespace {

using testing::fixture_path;
using testing::read_text;
using testing::vid;

Value eval(std::string_view text) { return eval_expr(nullptr, Context(), *parse_expression(text)); }

Value vertex_acc(const QueryResult& r, const std::string& name, VertexId v) {
  const ContextEntry* e = r.context.find(name);
  if (!e) throw std::runtime_error("no entry " + name);
  return read_accum((*std::get<VertexAccums>(*e))[v.value]);
}

Value global_acc(const QueryResult& r, const std::string& name) {
  const ContextEntry* e = r.context.find(name);
  if (!e) throw std::runtime_error("no entry " + name);
  return read_accum(std::get<AccumValue>(*e));
}

QueryResult run_one(Session& s, std::string_view text, int threads = 1) {
  auto results = s.run_source(text, EvalOptions{threads});
  if (results.size() != 1) throw std::runtime_error("expected one result");
  return std::move(results[0]);
}

std::vector<std::vector<Value>> sorted_rows(const Table& t) {
  auto rows = t.rows;
  std::sort(rows.begin(), rows.end(), ValueVectorLess());
  return rows;
}

// ---- expressions ----

TEST(Expressions, Arithmetic) {
  EXPECT_EQ(eval("1 + 2 * 3"), Value(7));
  EXPECT_EQ(eval("7 / 2"), Value(3));
  EXPECT_TRUE(eval("7 / 2").is_int());
  EXPECT_EQ(eval("7 / 2.0"), Value(3.5));
  EXPECT_EQ(eval("-7 / 2"), Value(-3));
  EXPECT_EQ(eval("7 % 3"), Value(1));
  EXPECT_THROW(eval("1 / 0"), Error);
  EXPECT_THROW(eval("1.5 / 0"), Error);
}

TEST(Expressions, SalesPrice) {
  // quantity 2, listPrice 10.0, percentDiscount 25.
  Value v = eval("2 * 10.0 * (100 - 25.0) / 100.0");
  EXPECT_TRUE(v.is_double());
  EXPECT_EQ(v.as_double(), 15.0);
}

TEST(Expressions, Builtins) {
  EXPECT_EQ(eval("log(1)"), Value(0.0));
  EXPECT_DOUBLE_EQ(eval("log(1 + 2)").as_double(), std::log(3.0));
  EXPECT_EQ(eval("abs(-3)"), Value(3));
  EXPECT_EQ(eval("sqrt(16.0)"), Value(4.0));
  EXPECT_EQ(eval("pow(2, 10)"), Value(1024.0));
  EXPECT_EQ(eval("year(to_datetime('2016-05-02'))"), Value(2016));
}

TEST(Expressions, CaseAndBooleans) {
  EXPECT_EQ(eval("CASE WHEN 1 > 2 THEN 'a' WHEN 2 > 1 THEN 'b' ELSE 'c' END"), Value("b"));
  EXPECT_EQ(eval("CASE WHEN 1 > 2 THEN 'a' ELSE 'c' END"), Value("c"));
  EXPECT_EQ(eval("NOT (1 < 2) OR 3 >= 3"), Value(true));
  EXPECT_EQ(eval("1 <> 1"), Value(false));
  EXPECT_EQ(eval("1 == 1.0"), Value(true));
}

TEST(Expressions, Strings) {
  EXPECT_EQ(eval("'ACME Corp' LIKE 'ACME%'"), Value(true));
  EXPECT_EQ(eval("'ACME' NOT LIKE 'ACME'"), Value(false));
  EXPECT_EQ(eval("'big toy store' CONTAINS 'toy'"), Value(true));
  EXPECT_TRUE(like_match("abc", "a_c"));
  EXPECT_FALSE(like_match("abc", "a_"));
  EXPECT_TRUE(like_match("", "%"));
}

TEST(Expressions, ContextNames) {
  Context c = Context().override({{"x", Value(4)}, {"s", Value("hi")}});
  EXPECT_EQ(eval_expr(nullptr, c, *parse_expression("x * x + 1")), Value(17));
}

// ---- sales fixture ----

struct Purchase {
  int customer;
  int product;
  int quantity;
  double discount;
};

struct SalesData {
  int customers = 0;
  std::vector<std::string> category;
  std::vector<double> price;
  std::vector<Purchase> bought;
};

SalesData random_sales(std::mt19937_64& rng, int customers, int products, int purchases) {
  SalesData d;
  d.customers = customers;
  const double prices[] = {9.99, 19.95, 0.1, 7.0, 3.3, 12.49};
  for (int p = 0; p < products; ++p) {
    d.category.push_back(p % 3 == 0 ? "books" : "toys");
    d.price.push_back(prices[std::uniform_int_distribution<int>(0, 5)(rng)]);
  }
  for (int i = 0; i < purchases; ++i) {
    d.bought.push_back({std::uniform_int_distribution<int>(0, customers - 1)(rng),
                        std::uniform_int_distribution<int>(0, products - 1)(rng),
                        std::uniform_int_distribution<int>(1, 9)(rng),
                        static_cast<double>(std::uniform_int_distribution<int>(0, 40)(rng)) / 3.0});
  }
  return d;
}

std::string cust_id(int i) { return "c" + std::to_string(i); }
std::string prod_id(int i) { return "p" + std::to_string(i); }

// Inserts vertices and edges in the order given by the permutations.
Session sales_store(const SalesData& d, const std::vector<int>& vertex_order,
                    const std::vector<int>& edge_order) {
  Session s;
  s.run_source(read_text(fixture_path("corpus/schema.gsql")));
  Graph& g = s.mutable_graph();
  const int products = static_cast<int>(d.price.size());
  for (int k : vertex_order) {
    if (k < d.customers) {
      g.add_vertex("Customer", Value(cust_id(k)), {{"name", Value("n" + cust_id(k))}});
    } else {
      int p = k - d.customers;
      g.add_vertex("Product", Value(prod_id(p)),
                   {{"name", Value("n" + prod_id(p))},
                    {"category", Value(d.category[p])},
                    {"listPrice", Value(d.price[p])}});
    }
  }
  (void)products;
  for (int i : edge_order) {
    const Purchase& b = d.bought[i];
    g.add_edge("Bought", *g.lookup("Customer", Value(cust_id(b.customer))),
               *g.lookup("Product", Value(prod_id(b.product))),
               {{"quantity", Value(b.quantity)}, {"percentDiscount", Value(b.discount)}});
  }
  return s;
}

std::vector<int> iota(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

Session sales_store(const SalesData& d) {
  return sales_store(d, iota(d.customers + static_cast<int>(d.price.size())),
                     iota(static_cast<int>(d.bought.size())));
}

double sale_price(const SalesData& d, const Purchase& b) {
  return b.quantity * d.price[b.product] * (100 - b.discount) / 100.0;
}

TEST(MultiAggregating, MatchesDirectComputation) {
  std::mt19937_64 rng(17);
  SalesData d = random_sales(rng, 6, 9, 40);
  Session s = sales_store(d);
  QueryResult r = run_one(s, read_text(fixture_path("corpus/multi_aggregating.gsql")));

  std::map<int, double> per_cust, per_toy;
  double total = 0;
  for (const auto& b : d.bought) {
    if (d.category[b.product] != "toys") continue;
    double x = sale_price(d, b);
    per_cust[b.customer] += x;
    per_toy[b.product] += x;
    total += x;
  }
  const Graph& g = s.graph();
  for (int c = 0; c < d.customers; ++c) {
    VertexId v = *g.lookup("Customer", Value(cust_id(c)));
    EXPECT_NEAR(vertex_acc(r, "@revenuePerCust", v).as_double(), per_cust[c], 1e-9) << c;
  }
  for (int p = 0; p < static_cast<int>(d.price.size()); ++p) {
    VertexId v = *g.lookup("Product", Value(prod_id(p)));
    EXPECT_NEAR(vertex_acc(r, "@revenuePerToy", v).as_double(), per_toy[p], 1e-9) << p;
  }
  EXPECT_NEAR(global_acc(r, "@@totalRevenue").as_double(), total, 1e-9);
}

TEST(MultiOutput, TwoTablesFromOneBlock) {
  std::mt19937_64 rng(23);
  SalesData d = random_sales(rng, 4, 6, 20);
  Session s = sales_store(d);
  QueryResult r = run_one(s, read_text(fixture_path("corpus/multi_output.gsql")));
  ASSERT_TRUE(r.tables.count("PerCust"));
  ASSERT_TRUE(r.tables.count("PerToy"));

  std::map<int, double> per_cust, per_toy;
  for (const auto& b : d.bought) {
    if (d.category[b.product] != "toys") continue;
    per_cust[b.customer] += sale_price(d, b);
    per_toy[b.product] += sale_price(d, b);
  }
  // One row per matching binding, holding the aggregated value.
  std::vector<std::pair<std::string, double>> want_cust, want_toy;
  for (const auto& b : d.bought) {
    if (d.category[b.product] != "toys") continue;
    want_cust.emplace_back("n" + cust_id(b.customer), per_cust[b.customer]);
    want_toy.emplace_back("n" + prod_id(b.product), per_toy[b.product]);
  }
  auto check = [](const Table& t, std::vector<std::pair<std::string, double>> want) {
    ASSERT_EQ(t.rows.size(), want.size());
    auto rows = sorted_rows(t);
    std::sort(want.begin(), want.end());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      EXPECT_EQ(rows[i][0], Value(want[i].first));
      EXPECT_NEAR(rows[i][1].as_double(), want[i].second, 1e-9);
    }
  };
  check(r.tables.at("PerCust"), want_cust);
  check(r.tables.at("PerToy"), want_toy);
}

// The result must not depend on vertex ids, edge insertion order or the order
// of the binding table.
TEST(Permutation, SalesAggregatesBitIdentical) {
  std::mt19937_64 rng(31);
  SalesData d = random_sales(rng, 12, 15, 120);
  const std::string query = read_text(fixture_path("corpus/multi_aggregating.gsql"));
  const int nv = d.customers + static_cast<int>(d.price.size());

  auto snapshot = [&](Session& s, const QueryResult& r) {
    std::map<std::string, std::string> out;
    const Graph& g = s.graph();
    for (std::uint32_t v = 0; v < g.num_vertices(); ++v) {
      const char* acc = g.vertex_type_name(VertexId{v}) == "Customer" ? "@revenuePerCust"
                                                                        : "@revenuePerToy";
      out[g.pk_text(VertexId{v})] = format_double(vertex_acc(r, acc, VertexId{v}).as_double());
    }
    out["total"] = format_double(global_acc(r, "@@totalRevenue").as_double());
    return out;
  };

  Session base = sales_store(d);
  auto want = snapshot(base, run_one(base, query));
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> vo = iota(nv), eo = iota(static_cast<int>(d.bought.size()));
    std::shuffle(vo.begin(), vo.end(), rng);
    std::shuffle(eo.begin(), eo.end(), rng);
    Session s = sales_store(d, vo, eo);
    int threads = trial % 2 == 0 ? 1 : 4;
    ASSERT_EQ(snapshot(s, run_one(s, query, threads)), want) << "trial " << trial;
  }
}

TEST(Permutation, PagerankBitIdenticalUnderRelabeling) {
  std::mt19937_64 rng(37);
  testing::RandomGraph rg = testing::random_graph(rng, 25, 3.0);
  auto scores_of = [&](const std::vector<int>& label) {
    // label[i] is the vertex id of original vertex i.
    std::vector<int> inverse(rg.n);
    for (int i = 0; i < rg.n; ++i) inverse[label[i]] = i;
    Session s;
    tools::prepare_bench(s);
    Graph& g = s.mutable_graph();
    for (int v = 0; v < rg.n; ++v) g.add_vertex("Page", Value(std::to_string(inverse[v])));
    testing::EdgeList edges = rg.edges;
    std::shuffle(edges.begin(), edges.end(), rng);
    for (auto [a, b] : edges)
      g.add_edge("LinkTo", VertexId{static_cast<std::uint32_t>(label[a])},
                 VertexId{static_cast<std::uint32_t>(label[b])});
    s.set_default_graph("Web");
    auto report = tools::bench_pagerank(s, 0.0, 8, 0.85);
    std::map<std::string, std::string> out;
    for (const auto& [id, score] : report.scores) out[id] = format_double(score);
    return out;
  };
  auto want = scores_of(iota(rg.n));
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> label = iota(rg.n);
    std::shuffle(label.begin(), label.end(), rng);
    ASSERT_EQ(scores_of(label), want) << "trial " << trial;
  }
}

// ---- snapshot semantics and primes ----

const char kSnapshotQuery[] = R"(
CREATE QUERY Snap() FOR GRAPH G {
  SumAccum<int> @x = 1;
  SumAccum<int> @@edges;
  SumAccum<int> @seenEdges;
  AllV = {V.*};
  S = SELECT t FROM AllV:s -(E>)- V:t
      ACCUM t.@x += s.@x, @@edges += 1, t.@seenEdges += @@edges;
}
)";

TEST(Snapshot, AccumReadsPreBlockValues) {
  for (int threads : {1, 8}) {
    Session s = testing::path_session(4, {{1, 2, "E"}, {2, 3, "E"}, {3, 4, "E"}});
    s.install(kSnapshotQuery);
    QueryResult r = s.call("Snap", {}, EvalOptions{threads});
    // Sequential visibility would give 1, 2, 3, 4.
    EXPECT_EQ(vertex_acc(r, "@x", vid(1)), Value(1));
    EXPECT_EQ(vertex_acc(r, "@x", vid(2)), Value(2));
    EXPECT_EQ(vertex_acc(r, "@x", vid(3)), Value(2));
    EXPECT_EQ(vertex_acc(r, "@x", vid(4)), Value(2));
    EXPECT_EQ(global_acc(r, "@@edges"), Value(3));
    for (int v = 1; v <= 4; ++v) EXPECT_EQ(vertex_acc(r, "@seenEdges", vid(v)), Value(0));
  }
}

TEST(Snapshot, PrimesHoldPreviousValues) {
  Session s = testing::path_session(4, {{1, 2, "E"}, {2, 3, "E"}, {3, 4, "E"}});
  s.install(kSnapshotQuery);
  QueryResult r = s.call("Snap", {});
  for (int v = 1; v <= 4; ++v) EXPECT_EQ(vertex_acc(r, "@x'", vid(v)), Value(1));
  EXPECT_EQ(global_acc(r, "@@edges'"), Value(0));
}

TEST(Snapshot, PrimeReadableInAccum) {
  Session s = testing::path_session(3, {{1, 2, "E"}, {2, 3, "E"}});
  s.install(R"(
CREATE QUERY P() FOR GRAPH G {
  SumAccum<int> @x = 5;
  SumAccum<int> @delta;
  AllV = {V.*};
  WHILE true LIMIT 1 DO
    A = SELECT v FROM AllV:v ACCUM v.@x += 10;
    B = SELECT v FROM AllV:v ACCUM v.@delta += v.@x - v.@x';
  END;
})");
  QueryResult r = s.call("P", {});
  // In block B the prime was refreshed to the value after block A.
  for (int v = 1; v <= 3; ++v) EXPECT_EQ(vertex_acc(r, "@delta", vid(v)), Value(0));

  s.install(R"(
CREATE QUERY Q() FOR GRAPH G {
  SumAccum<int> @x = 5;
  SumAccum<int> @delta;
  AllV = {V.*};
  WHILE true LIMIT 1 DO
    A = SELECT v FROM AllV:v ACCUM v.@x += 10 POST_ACCUM v.@delta += v.@x - v.@x';
  END;
})");
  QueryResult q = s.call("Q", {});
  for (int v = 1; v <= 3; ++v) EXPECT_EQ(vertex_acc(q, "@delta", vid(v)), Value(10));
}

TEST(Snapshot, PrimeOutsideLoopRejected) {
  Session s = testing::path_session(1, {});
  try {
    s.install(R"(
CREATE QUERY P() FOR GRAPH G {
  SumAccum<int> @@x;
  @@x += @@x';
})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Semantic);
  }
}

// ---- control flow ----

TEST(ControlFlow, WhileLimit) {
  Session s = testing::path_session(1, {});
  s.install(R"(
CREATE QUERY W(int lim) FOR GRAPH G {
  SumAccum<int> @@n;
  WHILE true LIMIT lim DO
    @@n += 1;
  END;
  RETURN @@n;
})");
  EXPECT_EQ(s.call("W", {Value(3)}).ret, Value(3));
  EXPECT_EQ(s.call("W", {Value(0)}).ret, Value(0));
}

TEST(ControlFlow, WhileConditionAndBreak) {
  Session s = testing::path_session(1, {});
  s.install(R"(
CREATE QUERY W() FOR GRAPH G {
  SumAccum<int> @@n;
  SumAccum<int> @@m;
  WHILE @@n < 5 DO
    @@n += 1;
  END;
  WHILE true DO
    @@m += 1;
    IF @@m >= 4 THEN BREAK; END;
  END;
  RETURN @@n * 10 + @@m;
})");
  EXPECT_EQ(s.call("W", {}).ret, Value(54));
}

TEST(ControlFlow, ForeachRangeIsInclusive) {
  Session s = testing::path_session(1, {});
  s.install(R"(
CREATE QUERY F() FOR GRAPH G {
  SumAccum<int> @@n;
  FOREACH i IN RANGE(2, 5) DO
    @@n += i;
  END;
  RETURN @@n;
})");
  EXPECT_EQ(s.call("F", {}).ret, Value(14));
}

// ---- vertex sets ----

TEST(VertexSets, AllOfTypeAndSetOps) {
  Session s = testing::web_session(6, {{0, 1}, {1, 2}, {3, 4}});
  s.install(R"(
CREATE QUERY Sets() FOR GRAPH Web {
  AllV = {Page.*};
  Src = SELECT s FROM AllV:s -(LinkTo>)- Page:t;
  Dst = SELECT t FROM AllV:s -(LinkTo>)- Page:t;
  Both = Src INTERSECT Dst;
  Either = Src UNION Dst;
  Only = Src MINUS Dst;
  RETURN AllV.size() * 1000 + Both.size() * 100 + Either.size() * 10 + Only.size();
})");
  // Src {0,1,3}, Dst {1,2,4}.
  EXPECT_EQ(s.call("Sets", {}).ret, Value(6000 + 100 + 50 + 2));
}

TEST(VertexSets, SelectOutputIsDuplicateFree) {
  Session s = testing::web_session(3, {{0, 2}, {1, 2}, {1, 2}});
  s.install(R"(
CREATE QUERY D() FOR GRAPH Web {
  AllV = {Page.*};
  T = SELECT t FROM AllV:s -(LinkTo>)- Page:t;
  RETURN T.size();
})");
  EXPECT_EQ(s.call("D", {}).ret, Value(1));
}

// ---- relational and graph atoms ----

struct Conn {
  std::string a, b;
  int year;
};

TEST(Joins, SeamlessQueryMatchesNestedLoops) {
  Session s;
  s.run_source(read_text(fixture_path("corpus/schema.gsql")));
  s.load_table(fixture_path("corpus/employees.csv"), "Employee");
  Graph& g = s.mutable_graph();
  std::map<std::string, std::string> company = {{"ann@x.com", "ACME"},
                                                {"bob@x.com", "Initech"},
                                                {"cy@x.com", "ACME"},
                                                {"di@x.com", "Globex"},
                                                {"ed@x.com", "ACME Labs"}};
  for (const auto& [email, c] : company)
    g.add_vertex("Person", Value(email), {{"currentCompany", Value(c)}});
  std::vector<Conn> conns = {{"ann@x.com", "cy@x.com", 2017}, {"ann@x.com", "di@x.com", 2018},
                             {"ann@x.com", "ed@x.com", 2015}, {"bob@x.com", "di@x.com", 2016},
                             {"bob@x.com", "ann@x.com", 2019}, {"di@x.com", "ed@x.com", 2020},
                             {"bob@x.com", "ed@x.com", 2021}};
  for (const auto& c : conns) {
    g.add_edge("Connected", *g.lookup("Person", Value(c.a)), *g.lookup("Person", Value(c.b)),
               {{"since", Value(parse_datetime(std::to_string(c.year) + "-06-01"))}});
  }
  QueryResult r = run_one(s, read_text(fixture_path("corpus/seamless.gsql")));
  ASSERT_TRUE(r.tables.count("result"));

  // Reference: nested loops over employees and both orientations of every edge.
  const Table& emp = s.tables().value("Employee").as_table();
  std::vector<std::vector<Value>> want;
  for (const auto& row : emp.rows) {
    std::int64_t n = 0;
    for (const auto& c : conns) {
      for (auto [p, o] : {std::pair{c.a, c.b}, std::pair{c.b, c.a}}) {
        if (Value(p) != row[0]) continue;
        if (like_match(company[o], "ACME")) continue;
        if (c.year < 2016) continue;
        ++n;
      }
    }
    if (n > 0) want.push_back({row[0], row[1], Value(n)});
  }
  std::sort(want.begin(), want.end(), ValueVectorLess());
  EXPECT_EQ(sorted_rows(r.tables.at("result")), want);
  EXPECT_FALSE(want.empty());
}

TEST(Joins, CrossGraphCountsBindings) {
  Session s;
  s.run_source(read_text(fixture_path("corpus/schema.gsql")));
  s.load_table(fixture_path("corpus/employees.csv"), "Employee");
  Graph& g = s.mutable_graph();
  for (const char* p : {"ann@x.com", "bob@x.com", "cy@x.com", "di@x.com"})
    g.add_vertex("Person", Value(p));
  auto person = [&](const char* p) { return *g.lookup("Person", Value(p)); };
  g.add_edge("Connected", person("ann@x.com"), person("cy@x.com"));
  g.add_edge("Connected", person("ann@x.com"), person("di@x.com"));
  g.add_edge("Connected", person("bob@x.com"), person("di@x.com"));
  VertexId ann = g.add_vertex("User", Value("ann@x.com"));
  VertexId bob = g.add_vertex("User", Value("bob@x.com"));
  const char* texts[] = {"ACME rocks", "lunch", "at ACME again", "Initech news"};
  VertexId authors[] = {ann, ann, ann, bob};
  for (int i = 0; i < 4; ++i) {
    VertexId t = g.add_vertex("Tweet", Value(i), {{"text", Value(texts[i])}});
    g.add_edge("Posts", authors[i], t);
  }
  QueryResult r = run_one(s, read_text(fixture_path("corpus/cross_graph.gsql")));
  // ann: 2 connections x 2 matching tweets; bob: 1 x 1.
  std::vector<std::vector<Value>> want = {
      {"ann@x.com", "Ann", 120000, 4, 4},
      {"bob@x.com", "Bob", 95000, 1, 1},
  };
  EXPECT_EQ(sorted_rows(r.tables.at("result")), want);
}

// ---- shipped algorithms ----

TEST(Pagerank, TwoVertexChain) {
  Session s = testing::web_session(2, {{0, 1}});
  auto rep = tools::bench_pagerank(s, 0.001, 10, 0.85);
  ASSERT_EQ(rep.scores.size(), 2u);
  EXPECT_NEAR(rep.scores[0].second, 0.15, 1e-12);
  EXPECT_NEAR(rep.scores[1].second, 0.2775, 1e-12);
  auto oracle = testing::pagerank_oracle(2, {{0, 1}}, 0.001, 10, 0.85);
  EXPECT_EQ(rep.iterations, oracle.iterations);
}

TEST(Pagerank, ZeroIterationsKeepsInitialScores) {
  Session s = testing::web_session(3, {{0, 1}, {1, 2}});
  auto rep = tools::bench_pagerank(s, 0.001, 0, 0.85);
  EXPECT_EQ(rep.iterations, 0);
  for (const auto& [id, score] : rep.scores) EXPECT_EQ(score, 1.0) << id;
}

TEST(Pagerank, CycleIsFixedPoint) {
  Session s = testing::web_session(3, {{0, 1}, {1, 2}, {2, 0}});
  auto rep = tools::bench_pagerank(s, 0.001, 10, 0.85);
  EXPECT_EQ(rep.iterations, 1);
  for (const auto& [id, score] : rep.scores) EXPECT_NEAR(score, 1.0, 1e-12) << id;
}

TEST(Pagerank, MatchesOracleOnRandomGraphs) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 15; ++trial) {
    testing::RandomGraph rg = testing::random_graph(rng, 30, 2.0);
    Session s = testing::web_session(rg.n, rg.edges);
    auto rep = tools::bench_pagerank(s, 1e-4, 25, 0.85);
    auto oracle = testing::pagerank_oracle(rg.n, rg.edges, 1e-4, 25, 0.85);
    EXPECT_EQ(rep.iterations, oracle.iterations);
    ASSERT_EQ(rep.scores.size(), static_cast<std::size_t>(rg.n));
    for (int v = 0; v < rg.n; ++v) EXPECT_NEAR(rep.scores[v].second, oracle.scores[v], 1e-9);
  }
}

TEST(Recommender, MatchesOracle) {
  Session s = testing::sales_session();
  for (const auto& [customer, likes] : testing::sales_likes()) {
    for (int k : {1, 2, 3, 10}) {
      QueryResult r = s.call_text("TopKToys", {customer, std::to_string(k)});
      const Table& t = r.tables.at("Recommended");
      auto want = testing::recommend_oracle(customer, k);
      ASSERT_EQ(t.rows.size(), want.size()) << customer << " k=" << k;
      for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_EQ(t.rows[i][0], Value(want[i].name));
        EXPECT_NEAR(t.rows[i][1].as_double(), want[i].rank, 1e-12);
        if (i > 0) {
          EXPECT_GE(t.rows[i - 1][1].as_double(), t.rows[i][1].as_double());
        }
      }
      ASSERT_TRUE(r.ret.has_value());
      EXPECT_EQ(r.ret->as_table().rows.size(), want.size());
    }
  }
}

TEST(Recommender, KnownRanksForC1) {
  Session s = testing::sales_session();
  QueryResult r = s.call_text("TopKToys", {"c1", "4"});
  const Table& t = r.tables.at("Recommended");
  ASSERT_EQ(t.rows.size(), 4u);
  // log(1+3) + log(1+1) + log(1+2), and so on.
  EXPECT_NEAR(t.rows[0][1].as_double(), std::log(4.0) + std::log(2.0) + std::log(3.0), 1e-12);
  EXPECT_EQ(t.rows[3][0], Value("toy_p4"));
  EXPECT_NEAR(t.rows[3][1].as_double(), std::log(3.0), 1e-12);
}

TEST(Khop, MatchesBfsOracle) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    testing::RandomGraph rg = testing::random_graph(rng, 40, 1.5);
    Session s = testing::web_session(rg.n, rg.edges);
    std::vector<std::string> seeds;
    for (int i = 0; i < 3; ++i)
      seeds.push_back(std::to_string(std::uniform_int_distribution<int>(0, rg.n - 1)(rng)));
    for (int k : {0, 1, 2, 4}) {
      auto rows = tools::bench_khop(s, seeds, k);
      ASSERT_EQ(rows.size(), seeds.size());
      for (const auto& row : rows)
        EXPECT_EQ(row.count, testing::bfs_exact_k(rg.n, rg.edges, std::stoi(row.seed), k))
            << "seed " << row.seed << " k " << k;
    }
  }
}

TEST(Wcc, MatchesUnionFind) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    testing::RandomGraph rg = testing::random_graph(rng, 40, 0.8);
    Session s = testing::web_session(rg.n, rg.edges);
    auto rep = tools::bench_wcc(s);
    auto labels = testing::union_find_labels(rg.n, rg.edges);
    std::map<std::string, std::string> got(rep.labels.begin(), rep.labels.end());
    std::set<int> roots(labels.begin(), labels.end());
    EXPECT_EQ(rep.components, static_cast<std::int64_t>(roots.size()));
    for (int v = 0; v < rg.n; ++v) EXPECT_EQ(got[std::to_string(v)], std::to_string(labels[v]));
  }
}

// ---- threads ----

TEST(Threads, FingerprintsAgree) {
  Session s = testing::sales_session();
  std::string one = testing::result_fingerprint(s.graph(), s.call_text("TopKToys", {"c2", "5"}));
  for (int threads : {2, 8}) {
    std::string many = testing::result_fingerprint(
        s.graph(), s.call_text("TopKToys", {"c2", "5"}, EvalOptions{threads}));
    EXPECT_EQ(many, one);
  }
}

// ---- runtime errors ----

TEST(Errors, ArgumentsAndRuntime) {
  Session s = testing::sales_session();
  EXPECT_THROW(s.call_text("TopKToys", {"nobody", "3"}), Error);
  EXPECT_THROW(s.call_text("TopKToys", {"c1", "three"}), Error);
  EXPECT_THROW(s.call_text("TopKToys", {"c1"}), Error);
  EXPECT_THROW(s.call_text("Missing", {}), Error);
  EXPECT_THROW(s.call_text("TopKToys", {"c1", "-1"}), Error);
}

}  // namespace
}  // namespace gsql
