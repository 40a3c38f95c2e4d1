#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gsql/session.hpp"

namespace gsql::tools {

struct KhopArgs {
  std::string graph;
  std::string seeds;
  std::string edges;
  int k = 3;
  bool timing = true;
};

struct WccArgs {
  std::string graph;
  std::string edges;
  bool labels = false;
  bool timing = true;
};

struct PagerankArgs {
  std::string graph;
  std::string edges;
  double max_change = 0.001;
  int max_iter = 10;
  double damping = 0.85;
  // 0 prints every score in vertex order; otherwise the top n by score.
  int top = 0;
  bool timing = true;
};

// Executes CLI commands against one session and renders their output.
class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  Session& session() { return session_; }
  EvalOptions& options() { return opts_; }
  bool& json() { return json_; }

  void ddl(const std::string& path);
  void load_edges(const std::string& graph, const std::string& tsv, const std::string& vtype,
                  const std::string& etype);
  void load_table(const std::string& csv, const std::string& name);
  void install(const std::string& path);
  void call(const std::string& query, const std::vector<std::string>& args);
  // GSQL text: DDL, query definitions, bare query blocks.
  void run_text(const std::string& text);

  void bench_khop(const KhopArgs& a);
  void bench_wcc(const WccArgs& a);
  void bench_pagerank(const PagerankArgs& a);

  // Reads commands and GSQL text until end of input. Errors are reported and
  // the loop continues; returns the number of failed inputs.
  int repl(std::istream& in, bool prompt);

 private:
  void print_result(const QueryResult& r);
  void print_warnings(const std::vector<std::string>& warnings);
  void use_graph(const std::string& graph, const std::string& edges);
  bool dispatch(const std::vector<std::string>& words);

  Session session_;
  EvalOptions opts_;
  bool json_ = false;
  std::ostream& out_;
  std::ostream& err_;
};

std::string read_file(const std::string& path);
// Whitespace-separated words; single or double quotes group.
std::vector<std::string> split_words(const std::string& line);
// One-line message for an error, with its kind and position.
std::string describe(const Error& e);

}  // namespace gsql::tools
