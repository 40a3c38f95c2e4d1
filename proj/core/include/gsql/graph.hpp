#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gsql/catalog.hpp"
#include "gsql/value.hpp"

namespace gsql {

enum class Direction { Out, In, Undirected, Any };

struct Incidence {
  EdgeId edge;
  VertexId neighbor;
};

using AttrMap = std::vector<std::pair<std::string, Value>>;

// The property graph (V, E, st, tau_v, tau_e, delta) over one catalog. Every
// graph definition in the catalog is a view onto this single store.
class Graph {
 public:
  explicit Graph(std::shared_ptr<const Catalog> catalog);

  const Catalog& catalog() const { return *catalog_; }
  const std::shared_ptr<const Catalog>& catalog_ptr() const { return catalog_; }

  VertexId add_vertex(std::string_view vtype, const Value& pk, const AttrMap& attrs = {});
  // Creates the paired inverse edge as well when the type has one.
  EdgeId add_edge(std::string_view etype, VertexId src, VertexId tgt, const AttrMap& attrs = {});

  std::optional<VertexId> lookup(std::string_view vtype, const Value& pk) const;
  std::optional<VertexId> lookup(int vtype, std::string_view pk_text) const;

  std::size_t num_vertices() const { return vertex_type_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  int vertex_type(VertexId v) const { return vertex_type_[v.value]; }
  int edge_type(EdgeId e) const { return edges_[e.value].type; }
  const std::string& vertex_type_name(VertexId v) const;
  const std::string& edge_type_name(EdgeId e) const;
  // Declared source/target (for undirected edges: as inserted).
  VertexId edge_source(EdgeId e) const { return edges_[e.value].src; }
  VertexId edge_target(EdgeId e) const { return edges_[e.value].tgt; }
  bool edge_directed(EdgeId e) const;
  // The paired inverse edge, if any.
  std::optional<EdgeId> edge_partner(EdgeId e) const;
  std::vector<std::pair<VertexId, VertexId>> st(EdgeId e) const;

  const Value& pk(VertexId v) const;
  std::string pk_text(VertexId v) const;
  const Value& vertex_attr(VertexId v, int index) const { return vertex_attrs_[v.value][index]; }
  // Throws when the vertex type has no such attribute.
  const Value& vertex_attr(VertexId v, std::string_view name) const;
  const Value& edge_attr(EdgeId e, std::string_view name) const;

  // Adjacency of v restricted to one edge type and role.
  std::span<const Incidence> adjacent(VertexId v, int etype, Direction role) const;
  // Edge types with at least one incidence at v.
  std::vector<int> incident_types(VertexId v) const;
  // Empty filter means all edge types.
  std::vector<Incidence> incident(VertexId v, Direction dir,
                                  const std::vector<int>& type_filter = {}) const;
  // Directed out-edges plus undirected edges passing the filter.
  std::size_t outdegree(VertexId v, const std::vector<int>& type_filter = {}) const;

  const std::vector<VertexId>& vertices_of_type(int vtype) const { return by_type_[vtype]; }

  // Calls f(etype, out, in, und) once per edge type incident to v.
  template <typename F>
  void for_each_group(VertexId v, F&& f) const {
    for (const auto& g : adjacency_[v.value]) {
      f(g.type, std::span<const Incidence>(g.out), std::span<const Incidence>(g.in),
        std::span<const Incidence>(g.und));
    }
  }

  void reserve(std::size_t vertices, std::size_t edges);

 private:
  struct EdgeRec {
    int type;
    VertexId src;
    VertexId tgt;
    std::uint32_t partner;  // kNoPartner when none
    std::shared_ptr<std::vector<Value>> attrs;
  };
  struct AdjGroup {
    int type;
    std::vector<Incidence> out;
    std::vector<Incidence> in;
    std::vector<Incidence> und;
  };
  static constexpr std::uint32_t kNoPartner = 0xffffffffu;

  AdjGroup& group(VertexId v, int etype);
  const AdjGroup* find_group(VertexId v, int etype) const;
  EdgeId insert_edge(int etype, VertexId src, VertexId tgt, std::shared_ptr<std::vector<Value>> attrs);
  std::string key_text(const Value& pk) const;

  std::shared_ptr<const Catalog> catalog_;
  std::vector<int> vertex_type_;
  std::vector<std::vector<Value>> vertex_attrs_;
  std::vector<std::vector<AdjGroup>> adjacency_;
  std::vector<EdgeRec> edges_;
  std::vector<std::unordered_map<std::string, VertexId>> pk_index_;
  std::vector<std::vector<VertexId>> by_type_;
};

// A graph definition's restriction of the store: only member vertex and edge
// types are visible.
class GraphView {
 public:
  // Whole store.
  explicit GraphView(const Graph& g);
  GraphView(const Graph& g, const GraphDef& def);

  const Graph& graph() const { return *g_; }
  const std::string& name() const { return name_; }
  bool has_vertex_type(int vtype) const { return vtype_member_[vtype]; }
  bool has_edge_type(int etype) const { return etype_member_[etype]; }
  bool has_vertex(VertexId v) const { return vtype_member_[g_->vertex_type(v)]; }
  const std::vector<int>& vertex_types() const { return vtypes_; }
  const std::vector<int>& edge_types() const { return etypes_; }
  std::vector<VertexId> vertices() const;

 private:
  const Graph* g_;
  std::string name_;
  std::vector<bool> vtype_member_;
  std::vector<bool> etype_member_;
  std::vector<int> vtypes_;
  std::vector<int> etypes_;
};

struct LoadReport {
  std::size_t vertices_created = 0;
  std::size_t edges_created = 0;
  std::size_t malformed_rows = 0;
  std::vector<std::string> messages;
};

// Two tab-separated columns per row: source id, target id. Unknown ids create
// vertices of vtype; each row creates one etype edge.
LoadReport load_edge_tsv(Graph& g, std::istream& in, std::string_view vtype, std::string_view etype);
LoadReport load_edge_tsv(Graph& g, const std::string& path, std::string_view vtype,
                         std::string_view etype);

// CSV with a header row. Empty cells are NULL; cells that parse as integers or
// decimals become numbers, everything else a string.
Table read_table_csv(std::istream& in, const std::string& name);
Table read_table_csv(const std::string& path, const std::string& name);

}  // namespace gsql
