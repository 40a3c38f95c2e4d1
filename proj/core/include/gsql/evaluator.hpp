#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gsql/checker.hpp"
#include "gsql/context.hpp"
#include "gsql/graph.hpp"

namespace gsql {

struct EvalOptions {
  int threads = 1;
  // Product-BFS layer dump for multi-hop patterns.
  std::ostream* trace = nullptr;
};

struct QueryResult {
  // INTO targets, plus "result" for the last output of a bare query block
  // without INTO.
  std::map<std::string, Table> tables;
  std::optional<Value> ret;
  // Final context: globals by name, accumulators as "@@A"/"@A" with primed
  // twins "@@A'"/"@A'", and "DG" holding the default graph name.
  Context context;
  std::vector<std::string> warnings;
};

// Runs a checked query. Relational tables referenced by name but not produced
// by the query are read from ctx0.
QueryResult run_query(const Graph& g, const Context& ctx0, const CheckedQuery& q,
                      const std::vector<Value>& args, const EvalOptions& opts = {});

// Evaluates an expression with no block variables. Names resolve through the
// checker's annotations when present, otherwise against ctx.
Value eval_expr(const Graph* g, const Context& ctx, const Expr& e);

// Parses a command-line argument for a parameter of the given type. Vertex
// arguments are primary keys of the declared vertex type.
Value parse_argument(const Graph& g, const TypeAst& type, const std::string& text);

// SQL LIKE with % and _ wildcards, case-sensitive.
bool like_match(std::string_view text, std::string_view pattern);

}  // namespace gsql
