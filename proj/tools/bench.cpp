#include "bench.hpp"

#include <chrono>
#include <fstream>

#include "shipped_queries.hpp"

namespace gsql::tools {

namespace {

double millis_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

const Table& table_of(const QueryResult& r, const std::string& name) {
  auto it = r.tables.find(name);
  if (it == r.tables.end()) fail(ErrorKind::Runtime, "query produced no table '" + name + "'");
  return it->second;
}

}  // namespace

std::string_view shipped_source(std::string_view name) {
  for (const auto& q : kShippedQueries) {
    if (q.name == name) return q.text;
  }
  fail(ErrorKind::Usage, "no shipped query '" + std::string(name) + "'");
}

void prepare_bench(Session& s) {
  if (!s.catalog().find_vertex_type("Page")) s.run_source(shipped_source("bench_schema"));
  static const std::pair<const char*, const char*> kQueries[] = {
      {"pagerank", "PageRank"}, {"khop", "KHop"}, {"wcc", "WCC"}};
  for (const auto& [file, query] : kQueries) {
    if (!s.has_query(query)) s.install(shipped_source(file));
  }
}

std::vector<KhopRow> bench_khop(Session& s, const std::vector<std::string>& seeds, int k,
                                const EvalOptions& opts) {
  prepare_bench(s);
  std::vector<KhopRow> rows;
  for (const auto& seed : seeds) {
    auto start = std::chrono::steady_clock::now();
    QueryResult r = s.call_text("KHop", {seed, std::to_string(k)}, opts);
    KhopRow row;
    row.seed = seed;
    row.count = r.ret->as_int();
    row.millis = millis_since(start);
    rows.push_back(std::move(row));
  }
  return rows;
}

WccReport bench_wcc(Session& s, const EvalOptions& opts) {
  prepare_bench(s);
  auto start = std::chrono::steady_clock::now();
  QueryResult r = s.call("WCC", {}, opts);
  WccReport out;
  out.millis = millis_since(start);
  out.components = r.ret->as_int();
  const Graph& g = s.graph();
  for (const auto& row : table_of(r, "Components").rows) {
    VertexId root{static_cast<std::uint32_t>(row[1].as_int())};
    out.labels.emplace_back(row[0].as_string(), g.pk_text(root));
  }
  return out;
}

PagerankReport bench_pagerank(Session& s, double max_change, int max_iter, double damping,
                              const EvalOptions& opts) {
  prepare_bench(s);
  auto start = std::chrono::steady_clock::now();
  QueryResult r = s.call("PageRank", {Value(max_change), Value(max_iter), Value(damping)}, opts);
  PagerankReport out;
  out.millis = millis_since(start);
  out.iterations = r.ret->as_int();
  for (const auto& row : table_of(r, "Scores").rows) {
    out.scores.emplace_back(row[0].as_string(), row[1].as_number());
  }
  return out;
}

std::vector<std::string> read_seeds(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open seeds file '" + path + "'");
  std::vector<std::string> seeds;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    std::size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    seeds.push_back(line.substr(b));
  }
  return seeds;
}

}  // namespace gsql::tools
