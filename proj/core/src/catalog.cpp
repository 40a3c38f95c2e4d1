#include "gsql/catalog.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace gsql {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void check_attributes(const std::vector<AttributeDef>& attrs, const std::string& owner,
                      SourcePos pos) {
  std::set<std::string> seen;
  for (const auto& a : attrs) {
    if (!seen.insert(a.name).second)
      fail(ErrorKind::Catalog, "duplicate attribute '" + a.name + "' in " + owner, pos);
  }
}

}  // namespace

std::string_view data_type_name(DataType t) {
  switch (t) {
    case DataType::Int:
      return "int";
    case DataType::UInt:
      return "uint";
    case DataType::Float:
      return "float";
    case DataType::Double:
      return "double";
    case DataType::String:
      return "string";
    case DataType::Bool:
      return "bool";
    case DataType::Datetime:
      return "datetime";
  }
  return "?";
}

std::optional<DataType> parse_data_type(std::string_view name) {
  std::string n = lower(name);
  if (n == "int" || n == "integer") return DataType::Int;
  if (n == "uint") return DataType::UInt;
  if (n == "float") return DataType::Float;
  if (n == "double") return DataType::Double;
  if (n == "string") return DataType::String;
  if (n == "bool" || n == "boolean") return DataType::Bool;
  if (n == "datetime" || n == "date") return DataType::Datetime;
  return std::nullopt;
}

Value default_for(DataType t) {
  switch (t) {
    case DataType::Int:
    case DataType::UInt:
      return Value(std::int64_t{0});
    case DataType::Float:
    case DataType::Double:
      return Value(0.0);
    case DataType::String:
      return Value(std::string());
    case DataType::Bool:
      return Value(false);
    case DataType::Datetime:
      return Value(Datetime{});
  }
  return {};
}

Value conform(DataType t, const Value& v, std::string_view what) {
  auto mismatch = [&]() -> Value {
    fail(ErrorKind::Load, "type mismatch for " + std::string(what) + ": expected " +
                              std::string(data_type_name(t)) + ", got " + to_debug_string(v));
  };
  switch (t) {
    case DataType::Int:
      if (v.is_int()) return v;
      return mismatch();
    case DataType::UInt:
      if (v.is_int() && v.as_int() >= 0) return v;
      return mismatch();
    case DataType::Float:
    case DataType::Double:
      if (v.is_numeric()) return Value(v.as_number());
      return mismatch();
    case DataType::String:
      if (v.is_string()) return v;
      return mismatch();
    case DataType::Bool:
      if (v.is_bool()) return v;
      return mismatch();
    case DataType::Datetime:
      if (v.is_datetime()) return v;
      if (v.is_string()) {
        Datetime dt;
        if (try_parse_datetime(v.as_string(), &dt)) return Value(dt);
      }
      return mismatch();
  }
  return mismatch();
}

int VertexTypeDef::attribute_index(std::string_view attr) const {
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].name == attr) return static_cast<int>(i);
  }
  return -1;
}

int EdgeTypeDef::attribute_index(std::string_view attr) const {
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].name == attr) return static_cast<int>(i);
  }
  return -1;
}

const VertexTypeDef* Catalog::find_vertex_type(std::string_view name) const {
  auto it = vertex_index_.find(std::string(name));
  return it == vertex_index_.end() ? nullptr : &vertex_types_[it->second];
}

const EdgeTypeDef* Catalog::find_edge_type(std::string_view name) const {
  auto it = edge_index_.find(std::string(name));
  return it == edge_index_.end() ? nullptr : &edge_types_[it->second];
}

const GraphDef* Catalog::find_graph(std::string_view name) const {
  auto it = graphs_.find(std::string(name));
  return it == graphs_.end() ? nullptr : &it->second;
}

Catalog apply_ddl(const DdlStmt& stmt, const Catalog& catalog) {
  Catalog out = catalog;
  auto type_taken = [&](const std::string& name) {
    return out.vertex_index_.count(name) || out.edge_index_.count(name);
  };

  if (const auto* v = std::get_if<CreateVertexStmt>(&stmt)) {
    if (type_taken(v->name)) fail(ErrorKind::Catalog, "duplicate type name '" + v->name + "'", v->pos);
    check_attributes(v->attributes, v->name, v->pos);
    VertexTypeDef def;
    def.id = static_cast<int>(out.vertex_types_.size());
    def.name = v->name;
    def.attributes = v->attributes;
    int pk_count = 0;
    for (std::size_t i = 0; i < def.attributes.size(); ++i) {
      if (def.attributes[i].is_primary_key) {
        ++pk_count;
        def.pk_index = static_cast<int>(i);
      }
    }
    if (pk_count > 1)
      fail(ErrorKind::Catalog, "vertex type '" + v->name + "' declares more than one primary key",
           v->pos);
    if (pk_count == 0) {
      if (def.attribute_index("id") >= 0)
        fail(ErrorKind::Catalog,
             "vertex type '" + v->name + "' has no primary key and an attribute named 'id'",
             v->pos);
      def.attributes.insert(def.attributes.begin(), AttributeDef{"id", DataType::String, true});
      def.pk_index = 0;
      def.implicit_pk = true;
    }
    out.vertex_index_[def.name] = def.id;
    out.vertex_types_.push_back(std::move(def));
    return out;
  }

  if (const auto* e = std::get_if<CreateEdgeStmt>(&stmt)) {
    if (type_taken(e->name)) fail(ErrorKind::Catalog, "duplicate type name '" + e->name + "'", e->pos);
    const VertexTypeDef* from = out.find_vertex_type(e->from_type);
    const VertexTypeDef* to = out.find_vertex_type(e->to_type);
    if (!from) fail(ErrorKind::Catalog, "unresolved endpoint type '" + e->from_type + "'", e->pos);
    if (!to) fail(ErrorKind::Catalog, "unresolved endpoint type '" + e->to_type + "'", e->pos);
    check_attributes(e->attributes, e->name, e->pos);
    for (const auto& d : e->discriminators) {
      bool found = std::any_of(e->attributes.begin(), e->attributes.end(),
                               [&](const AttributeDef& a) { return a.name == d; });
      if (!found)
        fail(ErrorKind::Catalog, "discriminator '" + d + "' is not an attribute of '" + e->name + "'",
             e->pos);
    }
    if (!e->reverse_name.empty()) {
      if (!e->directed)
        fail(ErrorKind::Catalog, "undirected edge '" + e->name + "' cannot declare a reverse edge",
             e->pos);
      if (e->reverse_name == e->name || type_taken(e->reverse_name))
        fail(ErrorKind::Catalog, "duplicate type name '" + e->reverse_name + "'", e->pos);
    }
    EdgeTypeDef def;
    def.id = static_cast<int>(out.edge_types_.size());
    def.name = e->name;
    def.directed = e->directed;
    def.from_type = e->from_type;
    def.to_type = e->to_type;
    def.from_id = from->id;
    def.to_id = to->id;
    def.attributes = e->attributes;
    def.discriminators = e->discriminators;
    def.reverse_name = e->reverse_name;
    out.edge_index_[def.name] = def.id;
    out.edge_types_.push_back(def);
    if (!e->reverse_name.empty()) {
      EdgeTypeDef rev = def;
      rev.id = static_cast<int>(out.edge_types_.size());
      rev.name = e->reverse_name;
      rev.from_type = def.to_type;
      rev.to_type = def.from_type;
      rev.from_id = def.to_id;
      rev.to_id = def.from_id;
      rev.reverse_name = def.name;
      rev.is_reverse = true;
      out.edge_index_[rev.name] = rev.id;
      out.edge_types_.push_back(std::move(rev));
    }
    return out;
  }

  const auto& g = std::get<CreateGraphStmt>(stmt);
  if (out.graphs_.count(g.name)) fail(ErrorKind::Catalog, "duplicate graph name '" + g.name + "'", g.pos);
  GraphDef def;
  def.name = g.name;
  std::set<int> vset, eset;
  for (const auto& m : g.members) {
    if (const auto* vt = out.find_vertex_type(m)) {
      vset.insert(vt->id);
    } else if (const auto* et = out.find_edge_type(m)) {
      eset.insert(et->id);
    } else {
      fail(ErrorKind::Catalog, "unresolved member '" + m + "' in graph '" + g.name + "'", g.pos);
    }
  }
  for (int eid : eset) {
    const auto& et = out.edge_types_[eid];
    if (!vset.count(et.from_id) || !vset.count(et.to_id))
      fail(ErrorKind::Catalog,
           "edge type '" + et.name + "' in graph '" + g.name + "' needs its endpoint types as members",
           g.pos);
  }
  def.vertex_types.assign(vset.begin(), vset.end());
  def.edge_types.assign(eset.begin(), eset.end());
  def.members = g.members;
  std::sort(def.members.begin(), def.members.end());
  def.members.erase(std::unique(def.members.begin(), def.members.end()), def.members.end());
  out.graphs_[def.name] = std::move(def);
  return out;
}

std::vector<std::string> edge_key(const EdgeTypeDef& edef, const Catalog& catalog) {
  std::vector<std::string> key;
  const auto& from = catalog.vertex_type(edef.from_id);
  const auto& to = catalog.vertex_type(edef.to_id);
  key.push_back(from.name + "." + from.attributes[from.pk_index].name);
  key.push_back(to.name + "." + to.attributes[to.pk_index].name);
  for (const auto& d : edef.discriminators) key.push_back(edef.name + "." + d);
  return key;
}

std::string Catalog::to_json() const {
  using nlohmann::ordered_json;
  auto attrs_json = [](const std::vector<AttributeDef>& attrs) {
    ordered_json arr = ordered_json::array();
    for (const auto& a : attrs) {
      ordered_json j;
      j["name"] = a.name;
      j["type"] = std::string(data_type_name(a.type));
      if (a.is_primary_key) j["primary_key"] = true;
      arr.push_back(j);
    }
    return arr;
  };
  std::map<std::string, ordered_json> vertices, edges;
  for (const auto& v : vertex_types_) {
    ordered_json j;
    j["attributes"] = attrs_json(v.attributes);
    if (v.implicit_pk) j["implicit_pk"] = true;
    vertices[v.name] = j;
  }
  for (const auto& e : edge_types_) {
    ordered_json j;
    j["directed"] = e.directed;
    j["from"] = e.from_type;
    j["to"] = e.to_type;
    j["attributes"] = attrs_json(e.attributes);
    if (!e.discriminators.empty()) j["discriminators"] = e.discriminators;
    if (!e.reverse_name.empty()) j[e.is_reverse ? "reverse_of" : "reverse"] = e.reverse_name;
    edges[e.name] = j;
  }
  ordered_json root;
  root["vertex_types"] = ordered_json::object();
  for (auto& [k, v] : vertices) root["vertex_types"][k] = v;
  root["edge_types"] = ordered_json::object();
  for (auto& [k, v] : edges) root["edge_types"][k] = v;
  root["graphs"] = ordered_json::object();
  for (const auto& [k, g] : graphs_) root["graphs"][k] = g.members;
  return root.dump(2);
}

}  // namespace gsql
