#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gsql/session.hpp"

namespace gsql::tools {

// GSQL text shipped with the tool: "bench_schema", "sales_schema",
// "pagerank", "khop", "wcc", "recommender".
std::string_view shipped_source(std::string_view name);

// Applies the Page/LinkTo schema unless the catalog already has it, and
// installs the benchmark queries that are missing.
void prepare_bench(Session& s);

struct KhopRow {
  std::string seed;
  std::int64_t count = 0;
  double millis = 0;
};

struct WccReport {
  // Page id and the id of the smallest-vid page of its component.
  std::vector<std::pair<std::string, std::string>> labels;
  std::int64_t components = 0;
  double millis = 0;
};

struct PagerankReport {
  std::vector<std::pair<std::string, double>> scores;
  std::int64_t iterations = 0;
  double millis = 0;
};

std::vector<KhopRow> bench_khop(Session& s, const std::vector<std::string>& seeds, int k,
                                const EvalOptions& opts = {});
WccReport bench_wcc(Session& s, const EvalOptions& opts = {});
PagerankReport bench_pagerank(Session& s, double max_change, int max_iter, double damping,
                              const EvalOptions& opts = {});

// Newline-separated vertex ids; blank lines are skipped.
std::vector<std::string> read_seeds(const std::string& path);

}  // namespace gsql::tools
