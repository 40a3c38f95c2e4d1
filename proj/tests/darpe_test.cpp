#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>

#include "gsql/darpe.hpp"
#include "gsql/parser.hpp"
#include "gsql/path_enum.hpp"
#include "support.hpp"

namespace gsql {
namespace {

using testing::g1_edges;
using testing::g2_edges;
using testing::path_session;
using testing::vid;

const char kAlphabetSchema[] = R"(
CREATE VERTEX N (id INT PRIMARY KEY)
CREATE DIRECTED EDGE E (FROM N, TO N)
CREATE DIRECTED EDGE F (FROM N, TO N)
CREATE DIRECTED EDGE G (FROM N, TO N)
CREATE DIRECTED EDGE H (FROM N, TO N)
CREATE UNDIRECTED EDGE J (FROM N, TO N)
)";

class AlphabetTest : public ::testing::Test {
 protected:
  void SetUp() override { s_.run_source(kAlphabetSchema); }

  DirSymbol sym(const std::string& type, Adorn dir) {
    return DirSymbol{s_.catalog().find_edge_type(type)->id, dir};
  }
  DarpeAutomaton compile(const std::string& text) {
    return compile_darpe(*parse_darpe(text), s_.catalog());
  }

  Session s_;
};

TEST_F(AlphabetTest, KleeneStarAcceptsEveryLength) {
  DarpeAutomaton a = compile("E>*");
  std::vector<DirSymbol> word;
  for (int len = 0; len < 6; ++len) {
    EXPECT_TRUE(a.accepts(word)) << len;
    word.push_back(sym("E", Adorn::Forward));
  }
  EXPECT_FALSE(a.accepts({sym("E", Adorn::Backward)}));
  EXPECT_EQ(a.fixed_length, -1);
}

TEST_F(AlphabetTest, BoundedRepetitionAcceptsOnlyItsRange) {
  DarpeAutomaton a = compile("E>*2..3");
  std::vector<DirSymbol> word;
  for (int len = 0; len <= 5; ++len) {
    EXPECT_EQ(a.accepts(word), len == 2 || len == 3) << len;
    word.push_back(sym("E", Adorn::Forward));
  }
}

TEST_F(AlphabetTest, OpenBoundsDefaultToZeroAndInfinity) {
  DarpeAutomaton upper = compile("E>*..2");
  DarpeAutomaton lower = compile("E>*2..");
  std::vector<DirSymbol> word;
  for (int len = 0; len <= 5; ++len) {
    EXPECT_EQ(upper.accepts(word), len <= 2) << len;
    EXPECT_EQ(lower.accepts(word), len >= 2) << len;
    word.push_back(sym("E", Adorn::Forward));
  }
}

TEST_F(AlphabetTest, MixedExpressionMembership) {
  DarpeAutomaton a = compile("E>.(F>|<G)*.<H.J");
  EXPECT_TRUE(a.accepts({sym("E", Adorn::Forward), sym("F", Adorn::Forward),
                         sym("G", Adorn::Backward), sym("H", Adorn::Backward),
                         sym("J", Adorn::None)}));
  EXPECT_TRUE(a.accepts({sym("E", Adorn::Forward), sym("H", Adorn::Backward), sym("J", Adorn::None)}));
  EXPECT_FALSE(a.accepts({sym("E", Adorn::Forward), sym("J", Adorn::None)}));
  EXPECT_FALSE(a.accepts({sym("E", Adorn::Forward), sym("G", Adorn::Forward),
                          sym("H", Adorn::Backward), sym("J", Adorn::None)}));
}

TEST_F(AlphabetTest, SingleHopHasFixedLengthOne) {
  EXPECT_TRUE(compile("E>").single_hop());
  EXPECT_TRUE(compile("E>|<F|J").single_hop());
  EXPECT_FALSE(compile("E>.F>").single_hop());
  EXPECT_EQ(compile("E>.F>").fixed_length, 2);
}

TEST_F(AlphabetTest, WildcardCoversEveryTypeInLegalAdornments) {
  DarpeAutomaton any = compile("_");
  for (const char* t : {"E", "F", "G", "H"}) {
    EXPECT_TRUE(any.accepts({sym(t, Adorn::Forward)})) << t;
    EXPECT_TRUE(any.accepts({sym(t, Adorn::Backward)})) << t;
  }
  EXPECT_TRUE(any.accepts({sym("J", Adorn::None)}));
  DarpeAutomaton fwd = compile("_>");
  EXPECT_TRUE(fwd.accepts({sym("E", Adorn::Forward)}));
  EXPECT_FALSE(fwd.accepts({sym("E", Adorn::Backward)}));
  EXPECT_FALSE(fwd.accepts({sym("J", Adorn::None)}));
}

TEST_F(AlphabetTest, AdornmentMustMatchDirectedness) {
  auto kind_of = [&](const std::string& text) {
    try {
      compile(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Usage;
  };
  EXPECT_EQ(kind_of("J>"), ErrorKind::Semantic);
  EXPECT_EQ(kind_of("<J"), ErrorKind::Semantic);
  EXPECT_EQ(kind_of("E"), ErrorKind::Semantic);
  EXPECT_EQ(kind_of("Nope>"), ErrorKind::Semantic);
}

TEST(HopLabel, DirectedAndUndirected) {
  Session s = path_session(2, {{1, 2, "E"}, {1, 2, "U"}});
  const Graph& g = s.graph();
  int e = s.catalog().find_edge_type("E")->id;
  int u = s.catalog().find_edge_type("U")->id;
  EXPECT_EQ(hop_label(g, vid(1), EdgeId{0}, vid(2)), (DirSymbol{e, Adorn::Forward}));
  EXPECT_EQ(hop_label(g, vid(2), EdgeId{0}, vid(1)), (DirSymbol{e, Adorn::Backward}));
  EXPECT_EQ(hop_label(g, vid(1), EdgeId{1}, vid(2)), (DirSymbol{u, Adorn::None}));
  EXPECT_EQ(hop_label(g, vid(2), EdgeId{1}, vid(1)), (DirSymbol{u, Adorn::None}));
}

std::vector<MatchEntry> match_from(const Session& s, const std::string& darpe, int src,
                                   int threads = 1) {
  GraphView view(s.graph(), *s.catalog().find_graph("G"));
  DarpeAutomaton a = compile_darpe(*parse_darpe(darpe), s.catalog());
  std::vector<VertexId> sources{vid(src)};
  MatchOptions opts;
  opts.threads = threads;
  return match_darpe(view, a, sources, {}, opts);
}

const MatchEntry* entry_for(const std::vector<MatchEntry>& entries, int tgt) {
  for (const auto& m : entries) {
    if (m.target == vid(tgt)) return &m;
  }
  return nullptr;
}

std::size_t count_paths(const Session& s, const std::string& darpe, int src, int tgt, Legality l) {
  GraphView view(s.graph(), *s.catalog().find_graph("G"));
  return enumerate_legal_paths(view, *parse_darpe(darpe), vid(src), vid(tgt), l).size();
}

TEST(PathSemantics, ShortestPathsOnG1) {
  Session s = path_session(12, g1_edges());
  auto m = match_from(s, "E>*", 1);
  const MatchEntry* to5 = entry_for(m, 5);
  ASSERT_NE(to5, nullptr);
  EXPECT_EQ(to5->multiplicity, 2u);
  EXPECT_EQ(to5->length, 4u);
}

TEST(PathSemantics, EnumerationLegalitiesOnG1) {
  Session s = path_session(12, g1_edges());
  EXPECT_EQ(count_paths(s, "E>*", 1, 5, Legality::AllShortest), 2u);
  EXPECT_EQ(count_paths(s, "E>*", 1, 5, Legality::NoRepeatVertex), 3u);
  EXPECT_EQ(count_paths(s, "E>*", 1, 5, Legality::NoRepeatEdge), 4u);
}

TEST(PathSemantics, G2NeedsTheCycle) {
  Session s = path_session(6, g2_edges());
  auto m = match_from(s, "E>*.F>.E>*", 1);
  const MatchEntry* to4 = entry_for(m, 4);
  ASSERT_NE(to4, nullptr);
  EXPECT_EQ(to4->multiplicity, 1u);
  EXPECT_EQ(to4->length, 7u);
  EXPECT_EQ(count_paths(s, "E>*.F>.E>*", 1, 4, Legality::NoRepeatVertex), 0u);
  EXPECT_EQ(count_paths(s, "E>*.F>.E>*", 1, 4, Legality::NoRepeatEdge), 0u);

  GraphView view(s.graph(), *s.catalog().find_graph("G"));
  auto paths = enumerate_legal_paths(view, *parse_darpe("E>*.F>.E>*"), vid(1), vid(4),
                                     Legality::AllShortest);
  ASSERT_EQ(paths.size(), 1u);
  std::vector<VertexId> expected;
  for (int v : {1, 2, 3, 5, 6, 2, 3, 4}) expected.push_back(vid(v));
  EXPECT_EQ(paths[0].vertices, expected);
}

TEST(PathSemantics, ZeroLengthMatchForStar) {
  Session s = path_session(3, {{1, 2, "E"}, {2, 3, "E"}});
  auto m = match_from(s, "E>*", 1);
  const MatchEntry* self = entry_for(m, 1);
  ASSERT_NE(self, nullptr);
  EXPECT_EQ(self->multiplicity, 1u);
  EXPECT_EQ(self->length, 0u);
  EXPECT_EQ(entry_for(match_from(s, "E>", 1), 1), nullptr);
}

TEST(PathSemantics, UndirectedHopsBothWays) {
  Session s = path_session(3, {{1, 2, "U"}, {3, 2, "U"}});
  auto m = match_from(s, "U.U", 1);
  const MatchEntry* to3 = entry_for(m, 3);
  ASSERT_NE(to3, nullptr);
  EXPECT_EQ(to3->multiplicity, 1u);
  // 1-2-1 reuses the edge, which all-shortest legality allows.
  const MatchEntry* back = entry_for(m, 1);
  ASSERT_NE(back, nullptr);
  EXPECT_EQ(back->multiplicity, 1u);
}

TEST(PathSemantics, ParallelEdgesMultiplyPaths) {
  Session s = path_session(3, {{1, 2, "E"}, {1, 2, "E"}, {2, 3, "E"}, {2, 3, "E"}, {2, 3, "E"}});
  const MatchEntry* to3 = entry_for(match_from(s, "E>.E>", 1), 3);
  ASSERT_NE(to3, nullptr);
  EXPECT_EQ(to3->multiplicity, 6u);
}

TEST(PathSemantics, DirectedSelfLoopReadsBothWays) {
  Session s = path_session(1, {{1, 1, "E"}});
  for (const char* d : {"E>", "<E", "E>|<E"}) {
    const MatchEntry* self = entry_for(match_from(s, d, 1), 1);
    ASSERT_NE(self, nullptr) << d;
    EXPECT_EQ(self->multiplicity, 1u) << d;
  }
}

TEST(PathSemantics, AlternationCountsPathsNotRuns) {
  // Both branches accept the single E> hop; it is still one path.
  Session s = path_session(2, {{1, 2, "E"}});
  const MatchEntry* to2 = entry_for(match_from(s, "E>|(E>|_>)", 1), 2);
  ASSERT_NE(to2, nullptr);
  EXPECT_EQ(to2->multiplicity, 1u);
}

TEST(PathSemantics, TargetFilterRestrictsResults) {
  Session s = path_session(12, g1_edges());
  GraphView view(s.graph(), *s.catalog().find_graph("G"));
  DarpeAutomaton a = compile_darpe(*parse_darpe("E>*"), s.catalog());
  std::vector<VertexId> src{vid(1)};
  auto m = match_darpe(view, a, src, [](VertexId v) { return v == vid(5); });
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].target, vid(5));
}

TEST(PathSemantics, EntriesGroupedBySourceTargetsAscending) {
  Session s = path_session(12, g1_edges());
  GraphView view(s.graph(), *s.catalog().find_graph("G"));
  DarpeAutomaton a = compile_darpe(*parse_darpe("E>*"), s.catalog());
  std::vector<VertexId> src{vid(3), vid(1)};
  auto m = match_darpe(view, a, src);
  ASSERT_FALSE(m.empty());
  EXPECT_EQ(m.front().source, vid(3));
  for (std::size_t i = 1; i < m.size(); ++i) {
    if (m[i].source == m[i - 1].source) {
      EXPECT_LT(m[i - 1].target, m[i].target);
    }
  }
  EXPECT_EQ(m.back().source, vid(1));
}

TEST(PathSemantics, TraceWritesLayers) {
  Session s = path_session(12, g1_edges());
  GraphView view(s.graph(), *s.catalog().find_graph("G"));
  DarpeAutomaton a = compile_darpe(*parse_darpe("E>*"), s.catalog());
  std::vector<VertexId> src{vid(1)};
  std::ostringstream trace;
  MatchOptions opts;
  opts.trace = &trace;
  match_darpe(view, a, src, {}, opts);
  EXPECT_FALSE(trace.str().empty());
}

TEST(PathEnumeration, GuardsLargeGraphs) {
  Session s = path_session(21, {});
  GraphView view(s.graph(), *s.catalog().find_graph("G"));
  EXPECT_THROW(enumerate_legal_paths(view, *parse_darpe("E>*"), vid(1), vid(2), Legality::AllShortest),
               Error);
}

TEST(PathEnumeration, UnrestrictedStopsAtCap) {
  Session s = path_session(1, {{1, 1, "E"}});
  GraphView view(s.graph(), *s.catalog().find_graph("G"));
  auto paths =
      enumerate_legal_paths(view, *parse_darpe("E>*"), vid(1), vid(1), Legality::Unrestricted, 3);
  // Lengths 0..3 around the loop.
  EXPECT_EQ(paths.size(), 4u);
}

// Randomized agreement with exhaustive enumeration over small graphs.
TEST(PathOracle, RandomInstancesAgree) {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 120; ++trial) {
    int n = std::uniform_int_distribution<int>(1, 8)(rng);
    Session s = path_session(n, testing::random_typed_edges(rng, n, 14));
    std::string d = testing::random_darpe_text(rng, 3);
    EXPECT_EQ(testing::compare_with_enumeration(s, d), "") << "trial " << trial;
  }
}

TEST(PathOracle, ThreadCountDoesNotChangeMatches) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    int n = std::uniform_int_distribution<int>(2, 10)(rng);
    Session s = path_session(n, testing::random_typed_edges(rng, n, 20));
    std::string d = testing::random_darpe_text(rng, 3);
    GraphView view(s.graph(), *s.catalog().find_graph("G"));
    DarpeAutomaton a = compile_darpe(*parse_darpe(d), s.catalog());
    std::vector<VertexId> all = view.vertices();
    MatchOptions eight;
    eight.threads = 8;
    EXPECT_EQ(match_darpe(view, a, all), match_darpe(view, a, all, {}, eight)) << d;
  }
}

}  // namespace
}  // namespace gsql
