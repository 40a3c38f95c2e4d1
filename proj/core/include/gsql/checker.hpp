#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gsql/accum.hpp"
#include "gsql/ast.hpp"
#include "gsql/catalog.hpp"

namespace gsql {

// What the checker may assume about the session a query runs in.
struct CheckEnv {
  std::shared_ptr<const Catalog> catalog;
  // Relational tables available by name, with their column names.
  std::map<std::string, std::vector<std::string>, std::less<>> tables;
  // Session default graph; empty for none.
  std::string default_graph;
};

enum class SlotKind { Param, Var, VertexSet, Table, GlobalAcc, VertexAcc };

// One query-level name: parameter, global variable, vertex set, output table
// or accumulator. Accumulator names keep their @/@@ prefix.
struct SlotInfo {
  std::string name;
  SlotKind kind = SlotKind::Var;
  SemType type;
  std::shared_ptr<const AccSpec> spec;
  // HeapAccum capacity expression, owned by the query.
  const Expr* capacity = nullptr;
};

struct OutputInfo {
  // A single bare vertex column without ALL or GROUP BY: the output is a
  // duplicate-free vertex set.
  bool vertex_set = false;
  // GROUP BY present, or aggregate functions in the columns.
  bool grouped = false;
  std::vector<std::string> columns;
  int into_slot = -1;
};

struct BlockInfo {
  // Block variables in column order of the binding table.
  std::vector<std::string> vars;
  std::vector<SemType> var_types;
  // Per atom, path and node: the slot of a variable bound outside the block
  // (such as a vertex parameter), else -1.
  std::vector<std::vector<std::vector<int>>> bound_slots;
  // Per atom and path: automaton for the concatenation of all hops, set when
  // some hop has a variable length.
  std::vector<std::vector<std::shared_ptr<const DarpeAutomaton>>> path_concat;
  std::vector<OutputInfo> outputs;
  int target_slot = -1;
  int accum_locals = 0;
  int post_locals = 0;
  // POST_ACCUM: (block var column, output column) pairs to bind per row.
  std::vector<std::pair<int, int>> post_bindings;
};

struct QueryPlan {
  std::vector<SlotInfo> slots;
  std::vector<int> param_slots;
  // Resolved default graph; empty means the whole store.
  std::string graph;

  int find_slot(std::string_view name) const;
};

struct CheckedQuery {
  std::shared_ptr<Query> query;
  std::shared_ptr<const QueryPlan> plan;
  std::vector<std::string> warnings;
};

// Resolves names, infers expression types and annotates the tree in place.
// Throws ErrorKind::Semantic on the first error.
CheckedQuery check_query(std::unique_ptr<Query> q, const CheckEnv& env);

SemType sem_type_of(const ElemType& t);
SemType sem_type_of(DataType t);

}  // namespace gsql
