#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "bench.hpp"
#include "gsql/darpe.hpp"
#include "gsql/parser.hpp"
#include "gsql/path_enum.hpp"
#include "gsql/render.hpp"

namespace gsql::testing {

std::string fixture_path(std::string_view rel) {
  return std::string(GSQL_TEST_FIXTURES) + "/" + std::string(rel);
}

std::string shipped_query_path(std::string_view file) {
  return std::string(GSQL_QUERIES_DIR) + "/" + std::string(file);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char kPathSchema[] = R"(
CREATE VERTEX V (id INT PRIMARY KEY)
CREATE DIRECTED EDGE E (FROM V, TO V)
CREATE DIRECTED EDGE F (FROM V, TO V)
CREATE UNDIRECTED EDGE U (FROM V, TO V)
CREATE GRAPH G (V, E, F, U)
)";

Session path_session(int n, const std::vector<TypedEdge>& edges) {
  Session s;
  s.run_source(kPathSchema);
  Graph& g = s.mutable_graph();
  for (int i = 1; i <= n; ++i) g.add_vertex("V", Value(i));
  for (const auto& e : edges) g.add_edge(e.type, vid(e.src), vid(e.tgt));
  return s;
}

VertexId vid(int id) { return VertexId{static_cast<std::uint32_t>(id - 1)}; }

std::vector<TypedEdge> g1_edges() {
  const int pairs[][2] = {{1, 2},  {2, 3},   {3, 4},   {4, 5}, {2, 6}, {6, 4}, {2, 9},
                          {9, 10}, {10, 11}, {11, 12}, {12, 4}, {3, 7}, {7, 8}, {8, 3}};
  std::vector<TypedEdge> out;
  for (const auto& p : pairs) out.push_back({p[0], p[1], "E"});
  return out;
}

std::vector<TypedEdge> g2_edges() {
  return {{1, 2, "E"}, {2, 3, "E"}, {3, 4, "E"}, {3, 5, "F"}, {5, 6, "E"}, {6, 2, "E"}};
}

std::string random_darpe_text(std::mt19937_64& rng, int depth) {
  static const char* kSymbols[] = {"E>", "<E", "F>", "<F", "U", "_>", "<_", "_"};
  std::uniform_int_distribution<int> op(0, depth > 0 ? 4 : 0);
  switch (op(rng)) {
    case 1:
      return "(" + random_darpe_text(rng, depth - 1) + "." + random_darpe_text(rng, depth - 1) + ")";
    case 2:
      return "(" + random_darpe_text(rng, depth - 1) + "|" + random_darpe_text(rng, depth - 1) + ")";
    case 3:
      return "(" + random_darpe_text(rng, depth - 1) + ")*";
    case 4: {
      int lo = std::uniform_int_distribution<int>(0, 2)(rng);
      int hi = lo + std::uniform_int_distribution<int>(0, 2)(rng);
      return "(" + random_darpe_text(rng, depth - 1) + ")*" + std::to_string(lo) + ".." +
             std::to_string(hi);
    }
    default:
      return kSymbols[std::uniform_int_distribution<int>(0, 7)(rng)];
  }
}

std::vector<TypedEdge> random_typed_edges(std::mt19937_64& rng, int n, int max_edges) {
  static const char* kTypes[] = {"E", "E", "F", "U"};
  std::uniform_int_distribution<int> pick(1, n);
  std::uniform_int_distribution<int> type(0, 3);
  int m = std::uniform_int_distribution<int>(0, max_edges)(rng);
  std::vector<TypedEdge> out;
  for (int i = 0; i < m; ++i) out.push_back({pick(rng), pick(rng), kTypes[type(rng)]});
  return out;
}

std::string compare_with_enumeration(const Session& s, const std::string& darpe, int threads) {
  const Graph& g = s.graph();
  GraphView view(g, *s.catalog().find_graph("G"));
  DarpePtr d = parse_darpe(darpe);
  DarpeAutomaton a = compile_darpe(*d, s.catalog());
  std::vector<VertexId> all = view.vertices();
  MatchOptions opts;
  opts.threads = threads;
  std::vector<MatchEntry> got = match_darpe(view, a, all, {}, opts);
  std::map<std::pair<std::uint32_t, std::uint32_t>, MatchEntry> by_pair;
  for (const auto& m : got) by_pair[{m.source.value, m.target.value}] = m;
  for (VertexId src : all) {
    for (VertexId tgt : all) {
      std::vector<Path> paths = enumerate_legal_paths(view, *d, src, tgt, Legality::AllShortest);
      auto it = by_pair.find({src.value, tgt.value});
      std::string where = darpe + " " + std::to_string(src.value + 1) + "->" +
                          std::to_string(tgt.value + 1) + ": ";
      if (paths.empty()) {
        if (it != by_pair.end()) return where + "unexpected match";
        continue;
      }
      if (it == by_pair.end()) return where + "missing match";
      std::size_t len = paths.front().edges.size();
      for (const auto& p : paths) {
        if (p.edges.size() != len) return where + "enumeration returned mixed lengths";
      }
      if (it->second.multiplicity != paths.size())
        return where + "multiplicity " + std::to_string(it->second.multiplicity) + " vs " +
               std::to_string(paths.size());
      if (it->second.length != len)
        return where + "length " + std::to_string(it->second.length) + " vs " + std::to_string(len);
    }
  }
  return "";
}

namespace {

ElemType scalar(ScalarKind k) {
  ElemType t;
  t.kind = k;
  return t;
}

AccSpec spec_of(AccKind kind, ScalarKind elem) {
  AccSpec s;
  s.kind = kind;
  s.elem = scalar(elem);
  return s;
}

std::string random_word(std::mt19937_64& rng) {
  static const char* kWords[] = {"ant", "bee", "cat", "dog", "eel", "fox", "gnu", "hen"};
  return kWords[std::uniform_int_distribution<int>(0, 7)(rng)];
}

}  // namespace

std::vector<AccCase> order_invariant_cases() {
  auto small_int = [](std::mt19937_64& rng) {
    return Value(std::uniform_int_distribution<std::int64_t>(-1000, 1000)(rng));
  };
  auto real = [](std::mt19937_64& rng) {
    return Value(std::uniform_real_distribution<double>(-1000.0, 1000.0)(rng));
  };
  auto flag = [](std::mt19937_64& rng) { return Value(std::bernoulli_distribution(0.3)(rng)); };
  auto word = [](std::mt19937_64& rng) { return Value(random_word(rng)); };

  std::vector<AccCase> out;
  out.push_back({"SumAccum<int>", spec_of(AccKind::Sum, ScalarKind::Int), 0, small_int});
  out.push_back({"SumAccum<float>", spec_of(AccKind::Sum, ScalarKind::Float), 0, real});
  out.push_back({"MinAccum<int>", spec_of(AccKind::Min, ScalarKind::Int), 0, small_int});
  out.push_back({"MinAccum<string>", spec_of(AccKind::Min, ScalarKind::String), 0, word});
  out.push_back({"MaxAccum<float>", spec_of(AccKind::Max, ScalarKind::Float), 0, real});
  out.push_back({"AvgAccum<float>", spec_of(AccKind::Avg, ScalarKind::Float), 0, real});
  out.push_back({"OrAccum", spec_of(AccKind::Or, ScalarKind::Bool), 0, flag});
  out.push_back({"AndAccum", spec_of(AccKind::And, ScalarKind::Bool), 0,
                 [](std::mt19937_64& rng) { return Value(std::bernoulli_distribution(0.9)(rng)); }});
  out.push_back({"SetAccum<string>", spec_of(AccKind::Set, ScalarKind::String), 0, word});
  out.push_back({"BagAccum<int>", spec_of(AccKind::Bag, ScalarKind::Int), 0,
                 [](std::mt19937_64& rng) { return Value(std::uniform_int_distribution<int>(0, 9)(rng)); }});

  AccSpec map = spec_of(AccKind::Map, ScalarKind::String);
  map.map_value_acc = std::make_shared<const AccSpec>(spec_of(AccKind::Sum, ScalarKind::Float));
  out.push_back({"MapAccum<string, SumAccum<float>>", map, 0, [real](std::mt19937_64& rng) {
                   Value k(random_word(rng));
                   return make_collection(CollectionKind::MapEntry, {k, real(rng)});
                 }});
  AccSpec map_set = spec_of(AccKind::Map, ScalarKind::Int);
  map_set.map_value_acc = std::make_shared<const AccSpec>(spec_of(AccKind::Set, ScalarKind::String));
  out.push_back({"MapAccum<int, SetAccum<string>>", map_set, 0, [](std::mt19937_64& rng) {
                   Value k(std::uniform_int_distribution<int>(0, 4)(rng));
                   return make_collection(CollectionKind::MapEntry, {k, Value(random_word(rng))});
                 }});

  AccSpec heap;
  heap.kind = AccKind::Heap;
  heap.elem.kind = ScalarKind::Tuple;
  heap.elem.fields = {{ScalarKind::Int, "score"}, {ScalarKind::String, "name"}};
  heap.heap_order = {HeapKey{0, true}};
  out.push_back({"HeapAccum<(int score, string name)>(5, score DESC)", heap, 5,
                 [](std::mt19937_64& rng) {
                   // Narrow score range so ties on the sort key are common.
                   Value score(std::uniform_int_distribution<int>(0, 6)(rng));
                   return make_tuple({score, Value(random_word(rng))}, {"score", "name"});
                 }});
  return out;
}

Session web_session(int n, const EdgeList& edges) {
  Session s;
  tools::prepare_bench(s);
  Graph& g = s.mutable_graph();
  g.reserve(static_cast<std::size_t>(n), edges.size());
  for (int i = 0; i < n; ++i) g.add_vertex("Page", Value(std::to_string(i)));
  for (const auto& [a, b] : edges) {
    g.add_edge("LinkTo", VertexId{static_cast<std::uint32_t>(a)},
               VertexId{static_cast<std::uint32_t>(b)});
  }
  s.set_default_graph("Web");
  return s;
}

RandomGraph random_graph(std::mt19937_64& rng, int max_n, double avg_degree) {
  RandomGraph out;
  out.n = std::uniform_int_distribution<int>(1, max_n)(rng);
  std::uniform_real_distribution<double> deg(0.0, 2.0 * avg_degree);
  int m = static_cast<int>(deg(rng) * out.n);
  std::uniform_int_distribution<int> pick(0, out.n - 1);
  for (int i = 0; i < m; ++i) out.edges.emplace_back(pick(rng), pick(rng));
  return out;
}

std::int64_t bfs_exact_k(int n, const EdgeList& edges, int seed, int k) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : edges) adj[a].push_back(b);
  std::vector<int> dist(n, -1);
  std::vector<int> queue{seed};
  dist[seed] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int u = queue[head];
    for (int w : adj[u]) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return std::count(dist.begin(), dist.end(), k);
}

std::vector<int> union_find_labels(int n, const EdgeList& edges) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& [a, b] : edges) {
    int ra = find(a), rb = find(b);
    // Keep the smaller index as the root so it doubles as the label.
    if (ra < rb) {
      parent[rb] = ra;
    } else if (rb < ra) {
      parent[ra] = rb;
    }
  }
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = find(i);
  return labels;
}

PagerankOracle pagerank_oracle(int n, const EdgeList& edges, double max_change, int max_iter,
                               double damping) {
  std::vector<int> outdeg(n, 0);
  for (const auto& [a, b] : edges) ++outdeg[a];
  PagerankOracle out;
  out.scores.assign(n, 1.0);
  double max_diff = 9999;
  while (max_diff > max_change && out.iterations < max_iter) {
    ++out.iterations;
    std::vector<double> received(n, 0.0);
    for (const auto& [a, b] : edges) received[b] += out.scores[a] / outdeg[a];
    max_diff = 0;
    for (int v = 0; v < n; ++v) {
      double next = 1 - damping + damping * received[v];
      max_diff = std::max(max_diff, std::abs(next - out.scores[v]));
      out.scores[v] = next;
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::vector<std::string>>> sales_likes() {
  return {{"c1", {"p1", "p2", "p3", "g1"}},
          {"c2", {"p1", "g1"}},
          {"c3", {"p1", "p2", "p3"}},
          {"c4", {"p1", "p2", "p4"}}};
}

Session sales_session() {
  Session s;
  s.run_source(tools::shipped_source("sales_schema"));
  s.install(tools::shipped_source("recommender"));
  Graph& g = s.mutable_graph();
  for (const auto& [c, likes] : sales_likes()) {
    g.add_vertex("Customer", Value(c), {{"name", Value("name_" + c)}});
  }
  for (int i = 1; i <= 4; ++i) {
    std::string id = "p" + std::to_string(i);
    g.add_vertex("Product", Value(id),
                 {{"name", Value("toy_" + id)}, {"category", Value("Toys")}, {"listPrice", Value(10.0)}});
  }
  g.add_vertex("Product", Value("g1"),
               {{"name", Value("game_g1")}, {"category", Value("Games")}, {"listPrice", Value(30.0)}});
  for (const auto& [c, likes] : sales_likes()) {
    VertexId cv = *g.lookup("Customer", Value(c));
    for (const auto& p : likes) g.add_edge("Likes", cv, *g.lookup("Product", Value(p)));
  }
  s.set_default_graph("SalesGraph");
  return s;
}

std::vector<Recommendation> recommend_oracle(const std::string& customer, int k) {
  auto likes = sales_likes();
  auto toys_of = [](const std::vector<std::string>& l) {
    std::set<std::string> out;
    for (const auto& p : l) {
      if (p[0] == 'p') out.insert(p);
    }
    return out;
  };
  std::set<std::string> mine;
  for (const auto& [c, l] : likes) {
    if (c == customer) mine = toys_of(l);
  }
  std::map<std::string, double> rank;
  for (const auto& [c, l] : likes) {
    if (c == customer) continue;
    std::set<std::string> theirs = toys_of(l);
    std::size_t common = 0;
    for (const auto& t : theirs) common += mine.count(t);
    if (common == 0) continue;
    double weight = std::log(1.0 + static_cast<double>(common));
    for (const auto& t : theirs) rank[t] += weight;
  }
  std::vector<Recommendation> out;
  for (const auto& [t, r] : rank) out.push_back({"toy_" + t, r});
  std::stable_sort(out.begin(), out.end(),
                   [](const Recommendation& a, const Recommendation& b) { return a.rank > b.rank; });
  if (static_cast<int>(out.size()) > k) out.resize(static_cast<std::size_t>(k));
  return out;
}

std::string result_fingerprint(const Graph& g, const QueryResult& r) {
  std::string out;
  for (const auto& [name, t] : r.tables) out += name + "\n" + table_tsv(&g, t);
  out += "return " + (r.ret ? value_json(&g, *r.ret) : std::string("none")) + "\n";
  return out;
}

}  // namespace gsql::testing
