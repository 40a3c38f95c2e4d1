#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "gsql/graph.hpp"
#include "support.hpp"

namespace gsql {
namespace {

using testing::path_session;
using testing::vid;

std::shared_ptr<const Catalog> corpus_catalog() {
  Session s;
  s.run_source(testing::read_text(testing::fixture_path("corpus/ddl.gsql")));
  return std::make_shared<const Catalog>(s.catalog());
}

std::vector<int> neighbor_ids(const std::vector<Incidence>& inc) {
  std::vector<int> out;
  for (const auto& i : inc) out.push_back(static_cast<int>(i.neighbor.value) + 1);
  std::sort(out.begin(), out.end());
  return out;
}

TEST(GraphStore, VerticesAndLookup) {
  Graph g(corpus_catalog());
  VertexId a = g.add_vertex("Person", Value("a@x"), {{"name", Value("Ann")}});
  VertexId t = g.add_vertex("Tweet", Value("17"));
  EXPECT_EQ(g.num_vertices(), 2u);
  EXPECT_EQ(g.lookup("Person", Value("a@x")), a);
  EXPECT_EQ(g.lookup("Tweet", Value(17)), t);
  EXPECT_FALSE(g.lookup("Person", Value("b@x")).has_value());
  EXPECT_EQ(g.vertex_attr(a, "name"), Value("Ann"));
  EXPECT_EQ(g.vertex_attr(a, "dob"), default_for(DataType::Datetime));
  EXPECT_EQ(g.pk(t), Value(17));
  EXPECT_EQ(g.vertex_type_name(t), "Tweet");
  EXPECT_THROW(g.vertex_attr(a, "nope"), Error);
}

TEST(GraphStore, VertexErrors) {
  Graph g(corpus_catalog());
  g.add_vertex("Person", Value("a@x"));
  EXPECT_THROW(g.add_vertex("Person", Value("a@x")), Error);
  EXPECT_THROW(g.add_vertex("Nope", Value("k")), Error);
  EXPECT_THROW(g.add_vertex("Tweet", Value("twelve")), Error);
  EXPECT_THROW(g.add_vertex("Person", Value("b@x"), {{"age", Value(3)}}), Error);
}

TEST(GraphStore, EdgeEndpointTypesChecked) {
  Graph g(corpus_catalog());
  VertexId p = g.add_vertex("Person", Value("a@x"));
  VertexId t = g.add_vertex("Tweet", Value(1));
  EXPECT_NO_THROW(g.add_edge("Posts", p, t));
  EXPECT_THROW(g.add_edge("Posts", t, p), Error);
  EXPECT_THROW(g.add_edge("Posts", p, VertexId{99}), Error);
  EXPECT_THROW(g.add_edge("Follows", p, p, {{"weight", Value(1)}}), Error);
}

TEST(GraphStore, UndirectedEdgeHasBothOrientations) {
  Graph g(corpus_catalog());
  VertexId a = g.add_vertex("Person", Value("a"));
  VertexId b = g.add_vertex("Person", Value("b"));
  EdgeId e = g.add_edge("Connected", a, b);
  EXPECT_FALSE(g.edge_directed(e));
  auto pairs = g.st(e);
  std::sort(pairs.begin(), pairs.end());
  EXPECT_EQ(pairs, (std::vector<std::pair<VertexId, VertexId>>{{a, b}, {b, a}}));
  EXPECT_EQ(g.outdegree(a), 1u);
  EXPECT_EQ(g.outdegree(b), 1u);
  EXPECT_EQ(g.incident(b, Direction::Undirected).size(), 1u);
  EXPECT_TRUE(g.incident(b, Direction::Out).empty());

  VertexId c = g.add_vertex("Person", Value("c"));
  EdgeId f = g.add_edge("Follows", a, c);
  EXPECT_EQ(g.st(f), (std::vector<std::pair<VertexId, VertexId>>{{a, c}}));
}

TEST(GraphStore, ReverseEdgeCreatedWithForward) {
  Graph g(corpus_catalog());
  VertexId x = g.add_vertex("Account", Value(1));
  VertexId y = g.add_vertex("Account", Value(2));
  EdgeId d = g.add_edge("Debit", x, y, {{"amount", Value(12.5)}});
  EXPECT_EQ(g.num_edges(), 2u);
  auto partner = g.edge_partner(d);
  ASSERT_TRUE(partner.has_value());
  EXPECT_EQ(g.edge_type_name(*partner), "Credit");
  EXPECT_EQ(g.edge_source(*partner), y);
  EXPECT_EQ(g.edge_target(*partner), x);
  EXPECT_EQ(g.edge_attr(*partner, "amount"), Value(12.5));
  EXPECT_EQ(g.edge_partner(*partner), d);

  int credit = g.catalog().find_edge_type("Credit")->id;
  auto out_y = g.incident(y, Direction::Out, {credit});
  ASSERT_EQ(out_y.size(), 1u);
  EXPECT_EQ(out_y[0].neighbor, x);
}

TEST(GraphStore, IncidenceOnG1) {
  Session s = path_session(12, testing::g1_edges());
  const Graph& g = s.graph();
  EXPECT_EQ(neighbor_ids(g.incident(vid(2), Direction::Out)), (std::vector<int>{3, 6, 9}));
  EXPECT_EQ(neighbor_ids(g.incident(vid(2), Direction::In)), (std::vector<int>{1}));
  EXPECT_EQ(neighbor_ids(g.incident(vid(4), Direction::In)), (std::vector<int>{3, 6, 12}));
  EXPECT_EQ(neighbor_ids(g.incident(vid(3), Direction::Any)), (std::vector<int>{2, 4, 7, 8}));
  EXPECT_EQ(g.outdegree(vid(2)), 3u);
  EXPECT_EQ(g.outdegree(vid(5)), 0u);
}

TEST(GraphStore, TypeFilter) {
  Session s = path_session(3, {{1, 2, "E"}, {1, 3, "F"}, {1, 2, "F"}});
  const Graph& g = s.graph();
  int e = g.catalog().find_edge_type("E")->id;
  int f = g.catalog().find_edge_type("F")->id;
  EXPECT_EQ(g.outdegree(vid(1)), 3u);
  EXPECT_EQ(g.outdegree(vid(1), {e}), 1u);
  EXPECT_EQ(g.outdegree(vid(1), {f}), 2u);
  EXPECT_EQ(g.adjacent(vid(1), f, Direction::Out).size(), 2u);
  EXPECT_TRUE(g.adjacent(vid(2), f, Direction::Out).empty());
}

TEST(GraphStore, ViewRestrictsTypes) {
  Graph g(corpus_catalog());
  g.add_vertex("Person", Value("a"));
  g.add_vertex("Tweet", Value(1));
  g.add_vertex("Account", Value(1));
  const GraphDef* linked = g.catalog().find_graph("LinkedInGraph");
  GraphView view(g, *linked);
  EXPECT_EQ(view.vertices().size(), 1u);
  EXPECT_FALSE(view.has_edge_type(g.catalog().find_edge_type("Follows")->id));
  EXPECT_TRUE(view.has_edge_type(g.catalog().find_edge_type("Connected")->id));
  EXPECT_EQ(GraphView(g).vertices().size(), 3u);
}

// ---- loaders ----

Session web() {
  Session s;
  s.run_source(testing::read_text(testing::shipped_query_path("bench_schema.gsql")));
  return s;
}

TEST(EdgeTsv, CreatesVerticesAndEdges) {
  Session s = web();
  std::istringstream in("a\tb\nb\tc\n\nc\ta\n");
  LoadReport r = load_edge_tsv(s.mutable_graph(), in, "Page", "LinkTo");
  EXPECT_EQ(r.vertices_created, 3u);
  EXPECT_EQ(r.edges_created, 3u);
  EXPECT_EQ(r.malformed_rows, 0u);
  EXPECT_EQ(s.graph().num_vertices(), 3u);
}

TEST(EdgeTsv, DuplicateRowsGiveParallelEdges) {
  Session s = web();
  std::istringstream in("1\t2\n1\t2\n");
  LoadReport r = load_edge_tsv(s.mutable_graph(), in, "Page", "LinkTo");
  EXPECT_EQ(r.edges_created, 2u);
  EXPECT_EQ(s.graph().outdegree(*s.graph().lookup("Page", Value("1"))), 2u);
}

TEST(EdgeTsv, EmptyInput) {
  Session s = web();
  std::istringstream in("");
  LoadReport r = load_edge_tsv(s.mutable_graph(), in, "Page", "LinkTo");
  EXPECT_EQ(r.edges_created, 0u);
  EXPECT_EQ(s.graph().num_vertices(), 0u);
}

TEST(EdgeTsv, MalformedRowsReportedWithLines) {
  Session s = web();
  std::istringstream in("1\t2\nlonely\n3\t4\t5\n6\t7\n");
  LoadReport r = load_edge_tsv(s.mutable_graph(), in, "Page", "LinkTo");
  EXPECT_EQ(r.edges_created, 2u);
  EXPECT_EQ(r.malformed_rows, 2u);
  ASSERT_EQ(r.messages.size(), 2u);
  EXPECT_EQ(r.messages[0].rfind("line 2", 0), 0u);
  EXPECT_EQ(r.messages[1].rfind("line 3", 0), 0u);
}

TEST(EdgeTsv, UnknownTypesAndMissingFile) {
  Session s = web();
  std::istringstream in("1\t2\n");
  EXPECT_THROW(load_edge_tsv(s.mutable_graph(), in, "Nope", "LinkTo"), Error);
  EXPECT_THROW(load_edge_tsv(s.mutable_graph(), "/nonexistent/edges.tsv", "Page", "LinkTo"),
               Error);
}

TEST(TableCsv, TypedCellsAndNulls) {
  std::istringstream in("name,age,score,note\nann,31,2.5,\n\"b, c\",40,-1,\"say \"\"hi\"\"\"\n");
  Table t = read_table_csv(in, "people");
  EXPECT_EQ(t.columns, (std::vector<std::string>{"name", "age", "score", "note"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][1], Value(31));
  EXPECT_TRUE(t.rows[0][1].is_int());
  EXPECT_TRUE(t.rows[0][2].is_double());
  EXPECT_TRUE(t.rows[0][3].is_null());
  EXPECT_EQ(t.rows[1][0], Value("b, c"));
  EXPECT_EQ(t.rows[1][3], Value("say \"hi\""));
  EXPECT_EQ(t.column_index("score"), 2);
}

TEST(TableCsv, HeaderOnlyAndErrors) {
  std::istringstream header("a,b\n");
  EXPECT_TRUE(read_table_csv(header, "t").rows.empty());
  std::istringstream empty("");
  EXPECT_THROW(read_table_csv(empty, "t"), Error);
  std::istringstream ragged("a,b\n1\n");
  EXPECT_THROW(read_table_csv(ragged, "t"), Error);
}

TEST(TableCsv, DuplicateTableNameRejected) {
  Session s;
  s.load_table(testing::fixture_path("corpus/employees.csv"), "Employee");
  EXPECT_EQ(s.tables().value("Employee").as_table().rows.size(), 2u);
  EXPECT_THROW(s.load_table(testing::fixture_path("corpus/employees.csv"), "Employee"), Error);
}

// Every st pair of every edge shows up in the adjacency of its source, and the
// adjacency holds nothing else.
TEST(GraphStore, AdjacencyMatchesIncidenceFunction) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    int n = std::uniform_int_distribution<int>(1, 12)(rng);
    Session s = path_session(n, testing::random_typed_edges(rng, n, 30));
    const Graph& g = s.graph();
    std::multiset<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> from_st, from_adj;
    for (std::uint32_t e = 0; e < g.num_edges(); ++e)
      for (auto [a, b] : g.st(EdgeId{e})) from_st.insert({a.value, e, b.value});
    for (std::uint32_t v = 0; v < g.num_vertices(); ++v) {
      for (const auto& inc : g.incident(VertexId{v}, Direction::Out))
        from_adj.insert({v, inc.edge.value, inc.neighbor.value});
      for (const auto& inc : g.incident(VertexId{v}, Direction::Undirected))
        from_adj.insert({v, inc.edge.value, inc.neighbor.value});
    }
    // Undirected self-loops have a single orientation.
    std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> st_set(from_st.begin(),
                                                                             from_st.end());
    std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> adj_set(from_adj.begin(),
                                                                              from_adj.end());
    ASSERT_EQ(st_set, adj_set) << "trial " << trial;

    std::size_t in_total = 0, out_total = 0;
    for (std::uint32_t v = 0; v < g.num_vertices(); ++v) {
      in_total += g.incident(VertexId{v}, Direction::In).size();
      out_total += g.incident(VertexId{v}, Direction::Out).size();
    }
    EXPECT_EQ(in_total, out_total);
  }
}

}  // namespace
}  // namespace gsql
