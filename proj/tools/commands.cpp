#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <iostream>
#include <sstream>

#include "bench.hpp"
#include "gsql/lexer.hpp"
#include "gsql/render.hpp"
#include "json.hpp"

namespace gsql::tools {

namespace {

using Json = nlohmann::ordered_json;

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Lex:
      return "lex error";
    case ErrorKind::Parse:
      return "parse error";
    case ErrorKind::Semantic:
      return "semantic error";
    case ErrorKind::Catalog:
      return "catalog error";
    case ErrorKind::Load:
      return "load error";
    case ErrorKind::Runtime:
      return "runtime error";
    case ErrorKind::Io:
      return "io error";
    case ErrorKind::Usage:
      return "usage error";
  }
  return "error";
}

std::string fixed(double v, int digits = 3) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

// An input is complete once braces and BEGIN/IF/WHILE/FOREACH/CASE ... END
// nest back to zero and it ends with ';', '}' or END.
bool complete_input(const std::string& text) {
  std::vector<Token> toks;
  try {
    toks = tokenize(text);
  } catch (const Error& e) {
    // Unterminated strings and comments may continue on the next line; any
    // other lexical error is reported right away.
    return e.message().rfind("unterminated", 0) != 0;
  }
  int depth = 0;
  for (const auto& t : toks) {
    if (t.kind == Tok::LBrace) ++depth;
    if (t.kind == Tok::RBrace) --depth;
    if (t.kind == Tok::Keyword) {
      if (t.text == "BEGIN" || t.text == "IF" || t.text == "WHILE" || t.text == "FOREACH" ||
          t.text == "CASE")
        ++depth;
      if (t.text == "END") --depth;
    }
  }
  if (depth > 0 || toks.size() < 2) return false;
  const Token& last = toks[toks.size() - 2];
  return last.kind == Tok::Semi || last.kind == Tok::RBrace ||
         (last.kind == Tok::Keyword && last.text == "END");
}

const char* kHelp =
    "commands:\n"
    "  ddl <file>                              apply schema statements and install queries\n"
    "  load-edges <graph> <tsv> <vtype> <etype> load a two-column edge list\n"
    "  load-table <csv> <name>                 load a relational table\n"
    "  install <file>                          install query definitions\n"
    "  call <query> [args...]                  run an installed query\n"
    "  bench khop|wcc|pagerank [flags]         run a benchmark query\n"
    "  set threads <n> | set format text|json  change session options\n"
    "  help, quit\n"
    "anything else is GSQL text, run once it ends with ';', '}' or the final END\n";

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> words;
  std::string cur;
  bool in_word = false;
  char quote = 0;
  for (char c : line) {
    if (quote) {
      if (c == quote) {
        quote = 0;
      } else {
        cur += c;
      }
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
      in_word = true;
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      if (in_word) words.push_back(std::move(cur));
      cur.clear();
      in_word = false;
    } else {
      cur += c;
      in_word = true;
    }
  }
  if (quote) fail(ErrorKind::Usage, "unterminated quote");
  if (in_word) words.push_back(std::move(cur));
  return words;
}

std::string describe(const Error& e) {
  std::string out = kind_name(e.kind());
  if (e.pos().line > 0) out += " at " + std::to_string(e.pos().line) + ":" + std::to_string(e.pos().column);
  return out + ": " + e.message();
}

void Runner::print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err_ << "warning: " << w << "\n";
}

void Runner::print_result(const QueryResult& r) {
  const Graph* g = &session_.graph();
  if (json_) {
    out_ << result_json(g, r) << "\n";
  } else {
    out_ << result_text(g, r);
  }
  print_warnings(r.warnings);
}

void Runner::ddl(const std::string& path) { run_text(read_file(path)); }

void Runner::run_text(const std::string& text) {
  for (const auto& r : session_.run_source(text, opts_)) print_result(r);
}

void Runner::load_edges(const std::string& graph, const std::string& tsv, const std::string& vtype,
                        const std::string& etype) {
  const GraphDef* def = session_.catalog().find_graph(graph);
  if (!def) fail(ErrorKind::Catalog, "unknown graph '" + graph + "'");
  auto member = [&](const std::string& name) {
    return std::find(def->members.begin(), def->members.end(), name) != def->members.end();
  };
  if (!member(vtype)) fail(ErrorKind::Catalog, "graph '" + graph + "' has no vertex type '" + vtype + "'");
  if (!member(etype)) fail(ErrorKind::Catalog, "graph '" + graph + "' has no edge type '" + etype + "'");
  LoadReport rep = session_.load_edges(tsv, vtype, etype);
  if (session_.default_graph().empty()) session_.set_default_graph(graph);
  for (const auto& m : rep.messages) err_ << tsv << ": " << m << "\n";
  if (json_) {
    Json j = {{"edges_created", rep.edges_created},
              {"vertices_created", rep.vertices_created},
              {"malformed_rows", rep.malformed_rows}};
    out_ << j.dump() << "\n";
  } else {
    out_ << "edges_created\t" << rep.edges_created << "\nvertices_created\t" << rep.vertices_created
         << "\nmalformed_rows\t" << rep.malformed_rows << "\n";
  }
}

void Runner::load_table(const std::string& csv, const std::string& name) {
  session_.load_table(csv, name);
  const Table& t = session_.tables().value(name).as_table();
  if (json_) {
    out_ << Json({{"table", name}, {"rows", t.rows.size()}}).dump() << "\n";
  } else {
    out_ << "table\t" << name << "\nrows\t" << t.rows.size() << "\n";
  }
}

void Runner::install(const std::string& path) {
  for (const auto& name : session_.install(read_file(path))) {
    if (json_) {
      out_ << Json({{"installed", name}}).dump() << "\n";
    } else {
      out_ << "installed\t" << name << "\n";
    }
  }
}

void Runner::call(const std::string& query, const std::vector<std::string>& args) {
  print_result(session_.call_text(query, args, opts_));
}

void Runner::use_graph(const std::string& graph, const std::string& edges) {
  prepare_bench(session_);
  if (!edges.empty()) {
    LoadReport rep = session_.load_edges(edges, "Page", "LinkTo");
    for (const auto& m : rep.messages) err_ << edges << ": " << m << "\n";
  }
  const GraphDef* def = session_.catalog().find_graph(graph);
  if (!def) fail(ErrorKind::Catalog, "unknown graph '" + graph + "'");
  for (const char* t : {"Page", "LinkTo"}) {
    if (std::find(def->members.begin(), def->members.end(), t) == def->members.end())
      fail(ErrorKind::Catalog, "benchmarks need Page and LinkTo in graph '" + graph + "'");
  }
}

void Runner::bench_khop(const KhopArgs& a) {
  use_graph(a.graph, a.edges);
  if (a.k < 0) fail(ErrorKind::Usage, "--k must not be negative");
  std::vector<std::string> seeds = read_seeds(a.seeds);
  auto rows = tools::bench_khop(session_, seeds, a.k, opts_);
  double total = 0, worst = 0;
  for (const auto& r : rows) {
    total += r.millis;
    worst = std::max(worst, r.millis);
  }
  double mean = rows.empty() ? 0 : total / static_cast<double>(rows.size());
  if (json_) {
    for (const auto& r : rows) {
      Json j = {{"seed", r.seed}, {"k", a.k}, {"count", r.count}};
      if (a.timing) j["millis"] = r.millis;
      out_ << j.dump() << "\n";
    }
    Json s = {{"seeds", rows.size()}};
    if (a.timing) {
      s["mean_millis"] = mean;
      s["max_millis"] = worst;
    }
    out_ << s.dump() << "\n";
    return;
  }
  out_ << "seed\tcount" << (a.timing ? "\tmillis" : "") << "\n";
  for (const auto& r : rows) {
    out_ << r.seed << "\t" << r.count;
    if (a.timing) out_ << "\t" << fixed(r.millis);
    out_ << "\n";
  }
  out_ << "# seeds\t" << rows.size() << "\n";
  if (a.timing) out_ << "# mean_millis\t" << fixed(mean) << "\n# max_millis\t" << fixed(worst) << "\n";
}

void Runner::bench_wcc(const WccArgs& a) {
  use_graph(a.graph, a.edges);
  WccReport rep = tools::bench_wcc(session_, opts_);
  if (json_) {
    if (a.labels) {
      for (const auto& [id, comp] : rep.labels) out_ << Json({{"id", id}, {"component", comp}}).dump() << "\n";
    }
    Json s = {{"vertices", rep.labels.size()}, {"components", rep.components}};
    if (a.timing) s["millis"] = rep.millis;
    out_ << s.dump() << "\n";
    return;
  }
  if (a.labels) {
    out_ << "id\tcomponent\n";
    for (const auto& [id, comp] : rep.labels) out_ << id << "\t" << comp << "\n";
  }
  out_ << "# vertices\t" << rep.labels.size() << "\n# components\t" << rep.components << "\n";
  if (a.timing) out_ << "# millis\t" << fixed(rep.millis) << "\n";
}

void Runner::bench_pagerank(const PagerankArgs& a) {
  use_graph(a.graph, a.edges);
  PagerankReport rep = tools::bench_pagerank(session_, a.max_change, a.max_iter, a.damping, opts_);
  auto scores = rep.scores;
  if (a.top > 0) {
    std::stable_sort(scores.begin(), scores.end(), [](const auto& x, const auto& y) {
      return x.second > y.second;
    });
    if (scores.size() > static_cast<std::size_t>(a.top)) scores.resize(static_cast<std::size_t>(a.top));
  }
  if (json_) {
    for (const auto& [id, score] : scores) out_ << Json({{"id", id}, {"score", score}}).dump() << "\n";
    Json s = {{"vertices", rep.scores.size()}, {"iterations", rep.iterations}};
    if (a.timing) s["millis"] = rep.millis;
    out_ << s.dump() << "\n";
    return;
  }
  out_ << "id\tscore\n";
  for (const auto& [id, score] : scores) out_ << id << "\t" << format_double(score) << "\n";
  out_ << "# vertices\t" << rep.scores.size() << "\n# iterations\t" << rep.iterations << "\n";
  if (a.timing) out_ << "# millis\t" << fixed(rep.millis) << "\n";
}

bool Runner::dispatch(const std::vector<std::string>& w) {
  const std::string& cmd = w[0];
  auto need = [&](std::size_t n, const char* usage) {
    if (w.size() != n) fail(ErrorKind::Usage, std::string("usage: ") + usage);
  };
  if (cmd == "help") {
    out_ << kHelp;
  } else if (cmd == "ddl") {
    need(2, "ddl <file>");
    ddl(w[1]);
  } else if (cmd == "load-edges") {
    need(5, "load-edges <graph> <tsv> <vtype> <etype>");
    load_edges(w[1], w[2], w[3], w[4]);
  } else if (cmd == "load-table") {
    need(3, "load-table <csv> <name>");
    load_table(w[1], w[2]);
  } else if (cmd == "install") {
    need(2, "install <file>");
    install(w[1]);
  } else if (cmd == "call") {
    if (w.size() < 2) fail(ErrorKind::Usage, "usage: call <query> [args...]");
    call(w[1], std::vector<std::string>(w.begin() + 2, w.end()));
  } else if (cmd == "set") {
    need(3, "set threads <n> | set format text|json");
    if (w[1] == "threads") {
      int n = std::stoi(w[2]);
      if (n < 1) fail(ErrorKind::Usage, "threads must be at least 1");
      opts_.threads = n;
    } else if (w[1] == "format" && (w[2] == "json" || w[2] == "text")) {
      json_ = w[2] == "json";
    } else {
      fail(ErrorKind::Usage, "usage: set threads <n> | set format text|json");
    }
  } else if (cmd == "bench") {
    if (w.size() < 2) fail(ErrorKind::Usage, "usage: bench khop|wcc|pagerank [flags]");
    // Flags as --name value pairs; --labels and --no-timing take no value.
    std::map<std::string, std::string> flags;
    for (std::size_t i = 2; i < w.size(); ++i) {
      if (w[i] == "--labels" || w[i] == "--no-timing") {
        flags[w[i]] = "1";
      } else if (w[i].rfind("--", 0) == 0 && i + 1 < w.size()) {
        flags[w[i]] = w[i + 1];
        ++i;
      } else {
        fail(ErrorKind::Usage, "unexpected bench argument '" + w[i] + "'");
      }
    }
    auto get = [&](const char* name, const std::string& dflt) {
      auto it = flags.find(name);
      return it == flags.end() ? dflt : it->second;
    };
    bool timing = !flags.count("--no-timing");
    if (w[1] == "khop") {
      KhopArgs a{get("--graph", "Web"), get("--seeds", ""), get("--edges", ""), std::stoi(get("--k", "3")), timing};
      if (a.seeds.empty()) fail(ErrorKind::Usage, "bench khop needs --seeds");
      bench_khop(a);
    } else if (w[1] == "wcc") {
      bench_wcc(WccArgs{get("--graph", "Web"), get("--edges", ""), flags.count("--labels") > 0, timing});
    } else if (w[1] == "pagerank") {
      bench_pagerank(PagerankArgs{get("--graph", "Web"), get("--edges", ""),
                                  std::stod(get("--max-change", "0.001")), std::stoi(get("--max-iter", "10")),
                                  std::stod(get("--damping", "0.85")), std::stoi(get("--top", "0")), timing});
    } else {
      fail(ErrorKind::Usage, "unknown benchmark '" + w[1] + "'");
    }
  } else {
    return false;
  }
  return true;
}

int Runner::repl(std::istream& in, bool prompt) {
  int failures = 0;
  std::string buffer;
  std::string line;
  auto report = [&](const std::string& message) {
    err_ << "error: " << message << "\n";
    ++failures;
  };
  for (;;) {
    if (prompt) out_ << (buffer.empty() ? "gsql> " : "   -> ") << std::flush;
    if (!std::getline(in, line)) break;
    try {
      if (buffer.empty()) {
        std::vector<std::string> words = split_words(line);
        if (words.empty()) continue;
        if (words[0] == "quit" || words[0] == "exit") break;
        if (dispatch(words)) continue;
      }
      buffer += line;
      buffer += '\n';
      if (!complete_input(buffer)) continue;
      std::string text = std::move(buffer);
      buffer.clear();
      run_text(text);
    } catch (const Error& e) {
      buffer.clear();
      report(describe(e));
    } catch (const std::exception& e) {
      buffer.clear();
      report(e.what());
    }
  }
  if (!buffer.empty()) report("incomplete input at end of stream");
  return failures;
}

}  // namespace gsql::tools
