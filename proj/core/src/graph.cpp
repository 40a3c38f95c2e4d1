#include "gsql/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace gsql {

Graph::Graph(std::shared_ptr<const Catalog> catalog) : catalog_(std::move(catalog)) {
  pk_index_.resize(catalog_->vertex_types().size());
  by_type_.resize(catalog_->vertex_types().size());
}

void Graph::reserve(std::size_t vertices, std::size_t edges) {
  vertex_type_.reserve(vertices);
  vertex_attrs_.reserve(vertices);
  adjacency_.reserve(vertices);
  edges_.reserve(edges);
}

std::string Graph::key_text(const Value& pk) const {
  if (pk.is_string()) return pk.as_string();
  if (pk.is_int()) return std::to_string(pk.as_int());
  return to_debug_string(pk);
}

VertexId Graph::add_vertex(std::string_view vtype, const Value& pk, const AttrMap& attrs) {
  const VertexTypeDef* def = catalog_->find_vertex_type(vtype);
  if (!def) fail(ErrorKind::Load, "unknown vertex type '" + std::string(vtype) + "'");
  const auto& pk_attr = def->attributes[def->pk_index];
  Value pk_value = pk;
  if (pk_attr.type == DataType::Int && pk.is_string()) {
    std::int64_t n = 0;
    const auto& s = pk.as_string();
    auto res = std::from_chars(s.data(), s.data() + s.size(), n);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      fail(ErrorKind::Load, "primary key '" + s + "' is not an integer");
    pk_value = Value(n);
  }
  pk_value = conform(pk_attr.type, pk_value, def->name + "." + pk_attr.name);
  std::string key = key_text(pk_value);
  auto& index = pk_index_[def->id];
  if (index.count(key))
    fail(ErrorKind::Load, "duplicate primary key '" + key + "' for vertex type '" + def->name + "'");

  std::vector<Value> values;
  values.reserve(def->attributes.size());
  for (const auto& a : def->attributes) values.push_back(default_for(a.type));
  values[def->pk_index] = pk_value;
  for (const auto& [name, value] : attrs) {
    int idx = def->attribute_index(name);
    if (idx < 0) fail(ErrorKind::Load, "unknown attribute '" + name + "' of '" + def->name + "'");
    if (idx == def->pk_index) {
      if (compare(conform(def->attributes[idx].type, value, name), pk_value) != 0)
        fail(ErrorKind::Load, "attribute '" + name + "' conflicts with the primary key");
      continue;
    }
    values[idx] = conform(def->attributes[idx].type, value, def->name + "." + name);
  }

  VertexId id{static_cast<std::uint32_t>(vertex_type_.size())};
  vertex_type_.push_back(def->id);
  vertex_attrs_.push_back(std::move(values));
  adjacency_.emplace_back();
  index.emplace(std::move(key), id);
  by_type_[def->id].push_back(id);
  return id;
}

Graph::AdjGroup& Graph::group(VertexId v, int etype) {
  auto& groups = adjacency_[v.value];
  for (auto& g : groups) {
    if (g.type == etype) return g;
  }
  groups.push_back(AdjGroup{etype, {}, {}, {}});
  return groups.back();
}

const Graph::AdjGroup* Graph::find_group(VertexId v, int etype) const {
  for (const auto& g : adjacency_[v.value]) {
    if (g.type == etype) return &g;
  }
  return nullptr;
}

EdgeId Graph::insert_edge(int etype, VertexId src, VertexId tgt,
                          std::shared_ptr<std::vector<Value>> attrs) {
  EdgeId id{static_cast<std::uint32_t>(edges_.size())};
  edges_.push_back(EdgeRec{etype, src, tgt, kNoPartner, std::move(attrs)});
  if (catalog_->edge_type(etype).directed) {
    group(src, etype).out.push_back({id, tgt});
    group(tgt, etype).in.push_back({id, src});
  } else {
    group(src, etype).und.push_back({id, tgt});
    if (src != tgt) group(tgt, etype).und.push_back({id, src});
  }
  return id;
}

EdgeId Graph::add_edge(std::string_view etype, VertexId src, VertexId tgt, const AttrMap& attrs) {
  const EdgeTypeDef* def = catalog_->find_edge_type(etype);
  if (!def) fail(ErrorKind::Load, "unknown edge type '" + std::string(etype) + "'");
  if (src.value >= num_vertices() || tgt.value >= num_vertices())
    fail(ErrorKind::Load, "edge endpoint does not exist");
  if (vertex_type(src) != def->from_id || vertex_type(tgt) != def->to_id)
    fail(ErrorKind::Load, "endpoint type mismatch for edge type '" + def->name + "': expected " +
                              def->from_type + " -> " + def->to_type + ", got " +
                              vertex_type_name(src) + " -> " + vertex_type_name(tgt));
  std::shared_ptr<std::vector<Value>> values;
  if (!def->attributes.empty()) {
    values = std::make_shared<std::vector<Value>>();
    for (const auto& a : def->attributes) values->push_back(default_for(a.type));
    for (const auto& [name, value] : attrs) {
      int idx = def->attribute_index(name);
      if (idx < 0) fail(ErrorKind::Load, "unknown attribute '" + name + "' of '" + def->name + "'");
      (*values)[idx] = conform(def->attributes[idx].type, value, def->name + "." + name);
    }
  } else if (!attrs.empty()) {
    fail(ErrorKind::Load, "unknown attribute '" + attrs.front().first + "' of '" + def->name + "'");
  }
  EdgeId id = insert_edge(def->id, src, tgt, values);
  if (!def->reverse_name.empty()) {
    const EdgeTypeDef* rev = catalog_->find_edge_type(def->reverse_name);
    EdgeId rid = insert_edge(rev->id, tgt, src, values);
    edges_[id.value].partner = rid.value;
    edges_[rid.value].partner = id.value;
  }
  return id;
}

std::optional<VertexId> Graph::lookup(std::string_view vtype, const Value& pk) const {
  const VertexTypeDef* def = catalog_->find_vertex_type(vtype);
  if (!def) return std::nullopt;
  return lookup(def->id, key_text(pk));
}

std::optional<VertexId> Graph::lookup(int vtype, std::string_view pk_text) const {
  const auto& index = pk_index_[vtype];
  auto it = index.find(std::string(pk_text));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

const std::string& Graph::vertex_type_name(VertexId v) const {
  return catalog_->vertex_type(vertex_type(v)).name;
}

const std::string& Graph::edge_type_name(EdgeId e) const {
  return catalog_->edge_type(edge_type(e)).name;
}

bool Graph::edge_directed(EdgeId e) const { return catalog_->edge_type(edge_type(e)).directed; }

std::optional<EdgeId> Graph::edge_partner(EdgeId e) const {
  auto p = edges_[e.value].partner;
  if (p == kNoPartner) return std::nullopt;
  return EdgeId{p};
}

std::vector<std::pair<VertexId, VertexId>> Graph::st(EdgeId e) const {
  const auto& rec = edges_[e.value];
  if (edge_directed(e) || rec.src == rec.tgt) return {{rec.src, rec.tgt}};
  return {{rec.src, rec.tgt}, {rec.tgt, rec.src}};
}

const Value& Graph::pk(VertexId v) const {
  const auto& def = catalog_->vertex_type(vertex_type(v));
  return vertex_attrs_[v.value][def.pk_index];
}

std::string Graph::pk_text(VertexId v) const { return key_text(pk(v)); }

const Value& Graph::vertex_attr(VertexId v, std::string_view name) const {
  const auto& def = catalog_->vertex_type(vertex_type(v));
  int idx = def.attribute_index(name);
  if (idx < 0)
    fail(ErrorKind::Runtime,
         "vertex type '" + def.name + "' has no attribute '" + std::string(name) + "'");
  return vertex_attrs_[v.value][idx];
}

const Value& Graph::edge_attr(EdgeId e, std::string_view name) const {
  const auto& def = catalog_->edge_type(edge_type(e));
  int idx = def.attribute_index(name);
  if (idx < 0)
    fail(ErrorKind::Runtime,
         "edge type '" + def.name + "' has no attribute '" + std::string(name) + "'");
  return (*edges_[e.value].attrs)[idx];
}

std::span<const Incidence> Graph::adjacent(VertexId v, int etype, Direction role) const {
  const AdjGroup* g = find_group(v, etype);
  if (!g) return {};
  switch (role) {
    case Direction::Out:
      return g->out;
    case Direction::In:
      return g->in;
    case Direction::Undirected:
      return g->und;
    case Direction::Any:
      break;
  }
  return {};
}

std::vector<int> Graph::incident_types(VertexId v) const {
  std::vector<int> types;
  for (const auto& g : adjacency_[v.value]) types.push_back(g.type);
  return types;
}

std::vector<Incidence> Graph::incident(VertexId v, Direction dir,
                                       const std::vector<int>& type_filter) const {
  std::vector<Incidence> out;
  for (const auto& g : adjacency_[v.value]) {
    if (!type_filter.empty() &&
        std::find(type_filter.begin(), type_filter.end(), g.type) == type_filter.end())
      continue;
    if (dir == Direction::Out || dir == Direction::Any)
      out.insert(out.end(), g.out.begin(), g.out.end());
    if (dir == Direction::In || dir == Direction::Any)
      out.insert(out.end(), g.in.begin(), g.in.end());
    if (dir == Direction::Undirected || dir == Direction::Any)
      out.insert(out.end(), g.und.begin(), g.und.end());
  }
  return out;
}

std::size_t Graph::outdegree(VertexId v, const std::vector<int>& type_filter) const {
  std::size_t n = 0;
  for (const auto& g : adjacency_[v.value]) {
    if (!type_filter.empty() &&
        std::find(type_filter.begin(), type_filter.end(), g.type) == type_filter.end())
      continue;
    n += g.out.size() + g.und.size();
  }
  return n;
}

GraphView::GraphView(const Graph& g)
    : g_(&g),
      vtype_member_(g.catalog().vertex_types().size(), true),
      etype_member_(g.catalog().edge_types().size(), true) {
  for (std::size_t i = 0; i < vtype_member_.size(); ++i) vtypes_.push_back(static_cast<int>(i));
  for (std::size_t i = 0; i < etype_member_.size(); ++i) etypes_.push_back(static_cast<int>(i));
}

GraphView::GraphView(const Graph& g, const GraphDef& def)
    : g_(&g),
      name_(def.name),
      vtype_member_(g.catalog().vertex_types().size(), false),
      etype_member_(g.catalog().edge_types().size(), false),
      vtypes_(def.vertex_types),
      etypes_(def.edge_types) {
  for (int t : vtypes_) vtype_member_[t] = true;
  for (int t : etypes_) etype_member_[t] = true;
}

std::vector<VertexId> GraphView::vertices() const {
  std::vector<VertexId> out;
  for (int t : vtypes_) {
    const auto& vs = g_->vertices_of_type(t);
    out.insert(out.end(), vs.begin(), vs.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

}  // namespace

LoadReport load_edge_tsv(Graph& g, std::istream& in, std::string_view vtype,
                         std::string_view etype) {
  const VertexTypeDef* vdef = g.catalog().find_vertex_type(vtype);
  if (!vdef) fail(ErrorKind::Load, "unknown vertex type '" + std::string(vtype) + "'");
  const EdgeTypeDef* edef = g.catalog().find_edge_type(etype);
  if (!edef) fail(ErrorKind::Load, "unknown edge type '" + std::string(etype) + "'");

  std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  LoadReport report;
  std::string_view rest(data);
  std::size_t line_no = 0;
  auto vertex_for = [&](std::string_view id) {
    if (auto v = g.lookup(vdef->id, id)) return *v;
    ++report.vertices_created;
    return g.add_vertex(vdef->name, Value(std::string(id)));
  };
  while (!rest.empty()) {
    std::size_t nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view() : rest.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    std::string_view a = tab == std::string_view::npos ? line : trim(line.substr(0, tab));
    std::string_view b = tab == std::string_view::npos ? std::string_view() : trim(line.substr(tab + 1));
    if (tab == std::string_view::npos || a.empty() || b.empty() ||
        b.find('\t') != std::string_view::npos) {
      ++report.malformed_rows;
      report.messages.push_back("line " + std::to_string(line_no) + ": expected two columns");
      continue;
    }
    try {
      VertexId src = vertex_for(a);
      VertexId tgt = vertex_for(b);
      g.add_edge(edef->name, src, tgt);
      ++report.edges_created;
    } catch (const Error& e) {
      ++report.malformed_rows;
      report.messages.push_back("line " + std::to_string(line_no) + ": " + e.message());
    }
  }
  return report;
}

LoadReport load_edge_tsv(Graph& g, const std::string& path, std::string_view vtype,
                         std::string_view etype) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  return load_edge_tsv(g, in, vtype, etype);
}

namespace {

bool split_csv_record(std::istream& in, std::vector<std::string>* fields, bool* quoted_any) {
  fields->clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char c;
  bool got = false;
  while (in.get(c)) {
    got = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      in_quotes = true;
      any = true;
    } else if (c == ',') {
      fields->push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      fields->push_back(std::move(field));
      if (quoted_any) *quoted_any = any;
      return true;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!got) return false;
  fields->push_back(std::move(field));
  if (quoted_any) *quoted_any = any;
  return true;
}

Value parse_cell(const std::string& cell) {
  if (cell.empty()) return {};
  std::int64_t n = 0;
  auto r = std::from_chars(cell.data(), cell.data() + cell.size(), n);
  if (r.ec == std::errc() && r.ptr == cell.data() + cell.size()) return Value(n);
  double d = 0;
  auto rd = std::from_chars(cell.data(), cell.data() + cell.size(), d);
  if (rd.ec == std::errc() && rd.ptr == cell.data() + cell.size()) return Value(d);
  return Value(cell);
}

}  // namespace

Table read_table_csv(std::istream& in, const std::string& name) {
  Table t;
  t.name = name;
  std::vector<std::string> fields;
  if (!split_csv_record(in, &fields, nullptr)) fail(ErrorKind::Load, "missing CSV header");
  for (auto& f : fields) t.columns.push_back(std::string(trim(f)));
  std::size_t line = 1;
  while (split_csv_record(in, &fields, nullptr)) {
    ++line;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != t.columns.size())
      fail(ErrorKind::Load, "ragged row at line " + std::to_string(line) + ": expected " +
                                std::to_string(t.columns.size()) + " fields, got " +
                                std::to_string(fields.size()));
    std::vector<Value> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_cell(f));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table read_table_csv(const std::string& path, const std::string& name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  return read_table_csv(in, name);
}

}  // namespace gsql
