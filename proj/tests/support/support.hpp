#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gsql/accum.hpp"
#include "gsql/session.hpp"

namespace gsql::testing {

std::string fixture_path(std::string_view rel);
std::string shipped_query_path(std::string_view file);
std::string read_text(const std::string& path);

// ---- small path fixtures ----

// One vertex type V (INT key), directed E and F, undirected U, graph G.
extern const char kPathSchema[];

struct TypedEdge {
  int src;
  int tgt;
  std::string type;
};

// Vertices 1..n are created in order, so vertex i has VertexId{i - 1}.
Session path_session(int n, const std::vector<TypedEdge>& edges);
VertexId vid(int id);

// 12 vertices; E edges only. Three simple 1 -> 5 paths, plus a fourth that
// reuses vertex 3 through the cycle 3 -> 7 -> 8 -> 3.
std::vector<TypedEdge> g1_edges();
// 6 vertices; one F edge between E-chains.
std::vector<TypedEdge> g2_edges();

// Random expression over E, F, U and the wildcard, at most depth levels deep.
std::string random_darpe_text(std::mt19937_64& rng, int depth);
// 1..max_n vertices and up to max_edges E/F/U edges.
std::vector<TypedEdge> random_typed_edges(std::mt19937_64& rng, int n, int max_edges);

// Compares match_darpe against exhaustive shortest-path enumeration for every
// (source, target) pair of the session's graph G. Returns "" on agreement,
// otherwise a description of the first difference.
std::string compare_with_enumeration(const Session& s, const std::string& darpe, int threads = 1);

// ---- accumulators ----

struct AccCase {
  std::string name;
  AccSpec spec;
  std::int64_t capacity = 0;
  std::function<Value(std::mt19937_64&)> input;
};

// Every order-invariant accumulator shape with a random input generator.
std::vector<AccCase> order_invariant_cases();

// ---- web graphs (Page / LinkTo) ----

using EdgeList = std::vector<std::pair<int, int>>;

// Pages "0".."n-1" in vid order, then the edges; benchmark queries installed.
Session web_session(int n, const EdgeList& edges);

// Up to max_n vertices, edge count drawn around avg_degree * n. Self-loops and
// parallel edges are allowed.
struct RandomGraph {
  int n = 0;
  EdgeList edges;
};
RandomGraph random_graph(std::mt19937_64& rng, int max_n, double avg_degree);

// ---- independent oracles ----

// Number of vertices at shortest directed distance exactly k from seed.
std::int64_t bfs_exact_k(int n, const EdgeList& edges, int seed, int k);

// Component label of every vertex: the smallest vertex index of its weakly
// connected component.
std::vector<int> union_find_labels(int n, const EdgeList& edges);

struct PagerankOracle {
  std::vector<double> scores;
  int iterations = 0;
};
// Jacobi iteration of score = (1 - d) + d * sum(in-neighbor score / outdeg),
// stopping once the largest change is <= max_change or after max_iter rounds.
PagerankOracle pagerank_oracle(int n, const EdgeList& edges, double max_change, int max_iter,
                               double damping);

// ---- recommender fixture ----

struct Recommendation {
  std::string name;
  double rank;
};

// Customers c1..c4, toys p1..p4 and the game g1, with Likes edges per
// customer. TopKToys is installed.
std::vector<std::pair<std::string, std::vector<std::string>>> sales_likes();
Session sales_session();
// Ranks of toys for customer c from the like lists alone: each other customer
// sharing toy likes with c contributes log(1 + shared) to every toy it likes.
std::vector<Recommendation> recommend_oracle(const std::string& customer, int k);

// Bit-exact text of every table and the return value, for comparisons across
// runs and thread counts.
std::string result_fingerprint(const Graph& g, const QueryResult& r);

}  // namespace gsql::testing
