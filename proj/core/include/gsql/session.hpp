#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gsql/catalog.hpp"
#include "gsql/checker.hpp"
#include "gsql/context.hpp"
#include "gsql/evaluator.hpp"
#include "gsql/graph.hpp"

namespace gsql {

// Catalog, graph store, relational tables and installed queries of one
// process. Installed queries keep their source and are re-checked against the
// current catalog on every call.
class Session {
 public:
  Session();

  const Catalog& catalog() const { return *catalog_; }
  const Graph& graph() const { return *graph_; }
  Graph& mutable_graph() { return *graph_; }
  const Context& tables() const { return tables_; }

  // Runs the DDL statements of a source text and installs its named queries.
  // WITH queries and bare query blocks are executed and their results returned.
  std::vector<QueryResult> run_source(std::string_view text, const EvalOptions& opts = {});
  void apply_ddl(const DdlStmt& stmt);
  // Returns the names of the installed queries.
  std::vector<std::string> install(std::string_view text);
  bool has_query(std::string_view name) const;
  std::vector<std::string> query_names() const;
  // Parsed but unchecked copy of an installed query.
  std::unique_ptr<Query> parsed(std::string_view name) const;

  LoadReport load_edges(const std::string& path, std::string_view vtype, std::string_view etype);
  void load_table(const std::string& path, const std::string& name);
  void add_table(Table table);

  QueryResult call(std::string_view name, const std::vector<Value>& args, const EvalOptions& opts = {});
  // Arguments as command-line text, converted by parameter type.
  QueryResult call_text(std::string_view name, const std::vector<std::string>& args,
                        const EvalOptions& opts = {});

  // Session default graph; empty for none.
  void set_default_graph(const std::string& name);
  const std::string& default_graph() const { return default_graph_; }

  CheckEnv check_env() const;

 private:
  std::shared_ptr<const Catalog> catalog_;
  std::unique_ptr<Graph> graph_;
  Context tables_;
  std::map<std::string, std::string, std::less<>> sources_;
  std::string default_graph_;
};

}  // namespace gsql
