#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "gsql/value.hpp"

namespace gsql {

enum class DataType { Int, UInt, Float, Double, String, Bool, Datetime };

std::string_view data_type_name(DataType t);
// Accepts the DDL spellings (INT, STRING, DATE, BOOLEAN, ...), case-insensitive.
std::optional<DataType> parse_data_type(std::string_view name);
Value default_for(DataType t);
// Converts v to the attribute type; throws on mismatch.
Value conform(DataType t, const Value& v, std::string_view what);

struct AttributeDef {
  std::string name;
  DataType type = DataType::String;
  bool is_primary_key = false;

  bool operator==(const AttributeDef&) const = default;
};

struct VertexTypeDef {
  int id = -1;
  std::string name;
  std::vector<AttributeDef> attributes;
  int pk_index = 0;
  bool implicit_pk = false;

  int attribute_index(std::string_view attr) const;
};

struct EdgeTypeDef {
  int id = -1;
  std::string name;
  bool directed = true;
  std::string from_type;
  std::string to_type;
  int from_id = -1;
  int to_id = -1;
  std::vector<AttributeDef> attributes;
  std::vector<std::string> discriminators;
  // For a forward type: the registered inverse. For an inverse: its forward partner.
  std::string reverse_name;
  bool is_reverse = false;

  int attribute_index(std::string_view attr) const;
};

struct GraphDef {
  std::string name;
  std::vector<std::string> members;
  std::vector<int> vertex_types;
  std::vector<int> edge_types;
};

struct CreateVertexStmt {
  std::string name;
  std::vector<AttributeDef> attributes;
  SourcePos pos;
};

struct CreateEdgeStmt {
  std::string name;
  bool directed = true;
  std::string from_type;
  std::string to_type;
  std::vector<AttributeDef> attributes;
  std::vector<std::string> discriminators;
  std::string reverse_name;
  SourcePos pos;
};

struct CreateGraphStmt {
  std::string name;
  std::vector<std::string> members;
  SourcePos pos;
};

using DdlStmt = std::variant<CreateVertexStmt, CreateEdgeStmt, CreateGraphStmt>;

class Catalog {
 public:
  const VertexTypeDef* find_vertex_type(std::string_view name) const;
  const EdgeTypeDef* find_edge_type(std::string_view name) const;
  const GraphDef* find_graph(std::string_view name) const;

  const VertexTypeDef& vertex_type(int id) const { return vertex_types_[id]; }
  const EdgeTypeDef& edge_type(int id) const { return edge_types_[id]; }
  const std::vector<VertexTypeDef>& vertex_types() const { return vertex_types_; }
  const std::vector<EdgeTypeDef>& edge_types() const { return edge_types_; }
  const std::map<std::string, GraphDef>& graphs() const { return graphs_; }

  // Non-normative debugging dump, keyed by name so it is independent of
  // declaration order.
  std::string to_json() const;

 private:
  friend Catalog apply_ddl(const DdlStmt& stmt, const Catalog& catalog);

  std::vector<VertexTypeDef> vertex_types_;
  std::vector<EdgeTypeDef> edge_types_;
  std::unordered_map<std::string, int> vertex_index_;
  std::unordered_map<std::string, int> edge_index_;
  std::map<std::string, GraphDef> graphs_;
};

Catalog apply_ddl(const DdlStmt& stmt, const Catalog& catalog);

// Key components as "Type.attr" strings: source pk, target pk, then
// discriminators in declaration order.
std::vector<std::string> edge_key(const EdgeTypeDef& edef, const Catalog& catalog);

}  // namespace gsql
