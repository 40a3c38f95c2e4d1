// gsql: load schemas and data, run queries, benchmarks and an interactive
// loop. Subcommands run in the order given and share one session, e.g.
//   gsql ddl schema.gsql load-edges Web edges.tsv Page LinkTo call PageRank 0.001 10 0.85

#include <unistd.h>

#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using gsql::tools::Runner;

// Exit codes: 0 ok, 1 user error, 2 internal error.
int run(int argc, char** argv) {
  Runner runner(std::cout, std::cerr);
  // Deferred so that a parse error leaves the session untouched.
  std::vector<std::function<void()>> steps;

  CLI::App app("GSQL property-graph query engine");
  app.require_subcommand(1, 0);
  int threads = 1;
  bool json = false;
  app.add_option("--threads", threads, "Worker threads for query evaluation")->check(CLI::PositiveNumber);
  app.add_flag("--json", json, "Render results as JSON");

  auto* ddl = app.add_subcommand("ddl", "Apply schema statements and install queries from a file");
  std::string ddl_file;
  ddl->add_option("file", ddl_file)->required();
  ddl->immediate_callback();
  ddl->callback([&] { steps.push_back([&runner, f = ddl_file] { runner.ddl(f); }); });

  auto* le = app.add_subcommand("load-edges", "Load a tab-separated edge list");
  std::string le_graph, le_tsv, le_vtype, le_etype;
  le->add_option("graph", le_graph)->required();
  le->add_option("tsv", le_tsv)->required();
  le->add_option("vtype", le_vtype)->required();
  le->add_option("etype", le_etype)->required();
  le->immediate_callback();
  le->callback([&] {
    steps.push_back([&runner, g = le_graph, t = le_tsv, v = le_vtype, e = le_etype] {
      runner.load_edges(g, t, v, e);
    });
  });

  auto* lt = app.add_subcommand("load-table", "Load a CSV file as a relational table");
  std::string lt_csv, lt_name;
  lt->add_option("csv", lt_csv)->required();
  lt->add_option("name", lt_name)->required();
  lt->immediate_callback();
  lt->callback([&] { steps.push_back([&runner, c = lt_csv, n = lt_name] { runner.load_table(c, n); }); });

  auto* inst = app.add_subcommand("install", "Install query definitions from a file");
  std::string inst_file;
  inst->add_option("file", inst_file)->required();
  inst->immediate_callback();
  inst->callback([&] { steps.push_back([&runner, f = inst_file] { runner.install(f); }); });

  auto* call = app.add_subcommand("call", "Run an installed query; takes the remaining arguments");
  std::string call_query;
  std::vector<std::string> call_args;
  call->add_option("query", call_query)->required();
  call->add_option("args", call_args);
  call->immediate_callback();
  call->callback([&] {
    steps.push_back([&runner, q = call_query, a = call_args] { runner.call(q, a); });
    call_args.clear();
  });

  auto* repl = app.add_subcommand("repl", "Read commands and GSQL text from standard input");
  repl->immediate_callback();
  bool repl_failed = false;
  repl->callback([&] {
    steps.push_back([&runner, &repl_failed] {
      repl_failed = runner.repl(std::cin, isatty(STDIN_FILENO)) > 0;
    });
  });

  auto* bench = app.add_subcommand("bench", "Run a benchmark query");
  bench->require_subcommand(1);

  auto* khop = bench->add_subcommand("khop", "Vertices at exactly k hops from each seed");
  gsql::tools::KhopArgs khop_args;
  bool khop_no_timing = false;
  khop->add_option("--graph", khop_args.graph, "Graph holding Page and LinkTo")->default_val("Web");
  khop->add_option("--seeds", khop_args.seeds, "Seed ids, one per line")->required();
  khop->add_option("--k", khop_args.k, "Hop count")->default_val(3);
  khop->add_option("--edges", khop_args.edges, "Edge list to load first");
  khop->add_flag("--no-timing", khop_no_timing, "Omit timings");
  khop->callback([&] {
    khop_args.timing = !khop_no_timing;
    steps.push_back([&runner, a = khop_args] { runner.bench_khop(a); });
  });

  auto* wcc = bench->add_subcommand("wcc", "Weakly connected components");
  gsql::tools::WccArgs wcc_args;
  bool wcc_no_timing = false;
  wcc->add_option("--graph", wcc_args.graph, "Graph holding Page and LinkTo")->default_val("Web");
  wcc->add_option("--edges", wcc_args.edges, "Edge list to load first");
  wcc->add_flag("--labels", wcc_args.labels, "Print the component of every vertex");
  wcc->add_flag("--no-timing", wcc_no_timing, "Omit timings");
  wcc->callback([&] {
    wcc_args.timing = !wcc_no_timing;
    steps.push_back([&runner, a = wcc_args] { runner.bench_wcc(a); });
  });

  auto* pr = bench->add_subcommand("pagerank", "PageRank through the shipped query");
  gsql::tools::PagerankArgs pr_args;
  bool pr_no_timing = false;
  pr->add_option("--graph", pr_args.graph, "Graph holding Page and LinkTo")->default_val("Web");
  pr->add_option("--edges", pr_args.edges, "Edge list to load first");
  pr->add_option("--max-change", pr_args.max_change, "Stop once no score moves by more than this")->default_val(0.001);
  pr->add_option("--max-iter", pr_args.max_iter, "Iteration limit")->default_val(10);
  pr->add_option("--damping", pr_args.damping, "Damping factor")->default_val(0.85);
  pr->add_option("--top", pr_args.top, "Print only the n best scores")->default_val(0);
  pr->add_flag("--no-timing", pr_no_timing, "Omit timings");
  pr->callback([&] {
    pr_args.timing = !pr_no_timing;
    steps.push_back([&runner, a = pr_args] { runner.bench_pagerank(a); });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  runner.options().threads = threads;
  runner.json() = json;
  try {
    for (auto& step : steps) step();
  } catch (const gsql::Error& e) {
    std::cerr << "error: " << gsql::tools::describe(e) << "\n";
    return 1;
  }
  return repl_failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
