#include "gsql/render.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace gsql {

namespace {

using Json = nlohmann::ordered_json;

std::string join_items(const Graph* g, const std::vector<Value>& items, const char* open,
                       const char* close) {
  std::string out = open;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += format_value(g, items[i]);
  }
  return out + close;
}

Json to_json(const Graph* g, const Value& v) {
  const auto& s = v.storage();
  switch (s.index()) {
    case 0:
      return nullptr;
    case 1:
      return v.as_bool();
    case 2:
      return v.as_int();
    case 3:
      return v.as_double();
    case 4:
      return v.as_string();
    case 5:
      return format_datetime(v.as_datetime());
    case 6:
    case 7:
    case 8:
      return format_value(g, v);
    case 9: {
      const Collection& c = v.as_collection();
      if (c.kind == CollectionKind::Tuple && !c.fields.empty()) {
        Json obj = Json::object();
        for (std::size_t i = 0; i < c.items.size(); ++i) obj[c.fields[i]] = to_json(g, c.items[i]);
        return obj;
      }
      Json arr = Json::array();
      for (const auto& x : c.items) arr.push_back(to_json(g, x));
      return arr;
    }
    case 10: {
      const auto& entries = v.as_map().entries;
      bool string_keys = std::all_of(entries.begin(), entries.end(), [](const auto& e) {
        return e.first.is_string() || e.first.is_vertex();
      });
      if (string_keys) {
        Json obj = Json::object();
        for (const auto& [k, x] : entries) obj[format_value(g, k)] = to_json(g, x);
        return obj;
      }
      Json arr = Json::array();
      for (const auto& [k, x] : entries) arr.push_back(Json::array({to_json(g, k), to_json(g, x)}));
      return arr;
    }
    case 11: {
      Json arr = Json::array();
      for (VertexId x : v.as_vertex_set().members()) arr.push_back(format_value(g, Value(x)));
      return arr;
    }
    default: {
      const Table& t = v.as_table();
      Json rows = Json::array();
      for (const auto& r : t.rows) {
        Json obj = Json::object();
        for (std::size_t c = 0; c < t.columns.size(); ++c) obj[t.columns[c]] = to_json(g, r[c]);
        rows.push_back(std::move(obj));
      }
      return rows;
    }
  }
}

Json table_to_json(const Graph* g, const Table& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json obj = Json::object();
    for (std::size_t c = 0; c < t.columns.size(); ++c) obj[t.columns[c]] = to_json(g, r[c]);
    rows.push_back(std::move(obj));
  }
  return rows;
}

}  // namespace

std::string format_value(const Graph* g, const Value& v) {
  const auto& s = v.storage();
  switch (s.index()) {
    case 0:
      return "NULL";
    case 1:
      return v.as_bool() ? "true" : "false";
    case 2:
      return std::to_string(v.as_int());
    case 3:
      return format_double(v.as_double());
    case 4:
      return v.as_string();
    case 5:
      return format_datetime(v.as_datetime());
    case 6:
      return g ? g->pk_text(v.as_vertex()) : "#" + std::to_string(v.as_vertex().value);
    case 7: {
      EdgeId e = v.as_edge();
      if (!g) return "e#" + std::to_string(e.value);
      return g->edge_type_name(e) + "(" + g->pk_text(g->edge_source(e)) + "," +
             g->pk_text(g->edge_target(e)) + ")";
    }
    case 8: {
      const RowRef& r = v.as_row();
      return r.table->name + "[" + std::to_string(r.row) + "]";
    }
    case 9: {
      const Collection& c = v.as_collection();
      if (c.kind == CollectionKind::MapEntry && c.items.size() == 2)
        return "(" + format_value(g, c.items[0]) + " -> " + format_value(g, c.items[1]) + ")";
      if (c.kind == CollectionKind::Tuple) return join_items(g, c.items, "(", ")");
      if (c.kind == CollectionKind::List) return join_items(g, c.items, "[", "]");
      return join_items(g, c.items, "{", "}");
    }
    case 10: {
      std::string out = "{";
      bool first = true;
      for (const auto& [k, x] : v.as_map().entries) {
        if (!first) out += ", ";
        first = false;
        out += format_value(g, k) + " -> " + format_value(g, x);
      }
      return out + "}";
    }
    case 11: {
      std::vector<Value> items;
      for (VertexId x : v.as_vertex_set().members()) items.emplace_back(x);
      return join_items(g, items, "{", "}");
    }
    default:
      return "<table " + v.as_table().name + ">";
  }
}

std::string value_json(const Graph* g, const Value& v) { return to_json(g, v).dump(); }

std::string table_tsv(const Graph* g, const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += '\t';
    out += t.columns[c];
  }
  out += '\n';
  for (const auto& r : t.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) out += '\t';
      out += format_value(g, r[c]);
    }
    out += '\n';
  }
  return out;
}

std::string table_text(const Graph* g, const Table& t) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(t.columns.size(), 0);
  for (std::size_t c = 0; c < t.columns.size(); ++c) width[c] = t.columns[c].size();
  for (const auto& r : t.rows) {
    auto& line = cells.emplace_back();
    for (std::size_t c = 0; c < r.size(); ++c) {
      line.push_back(format_value(g, r[c]));
      width[c] = std::max(width[c], line.back().size());
    }
  }
  auto emit = [&](std::string& out, const std::vector<std::string>& line) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c) out += "  ";
      out += line[c];
      if (c + 1 < line.size()) out.append(width[c] - line[c].size(), ' ');
    }
    out += '\n';
  };
  std::string out;
  emit(out, t.columns);
  for (const auto& line : cells) emit(out, line);
  return out;
}

std::string table_json(const Graph* g, const Table& t, int indent) {
  return table_to_json(g, t).dump(indent);
}

std::string result_json(const Graph* g, const QueryResult& r, int indent) {
  Json out = Json::object();
  Json tables = Json::object();
  for (const auto& [name, t] : r.tables) tables[name] = table_to_json(g, t);
  out["tables"] = std::move(tables);
  out["return"] = r.ret ? to_json(g, *r.ret) : Json(nullptr);
  out["warnings"] = r.warnings;
  return out.dump(indent);
}

std::string result_text(const Graph* g, const QueryResult& r) {
  std::string out;
  for (const auto& [name, t] : r.tables) {
    out += name + ":\n";
    out += table_text(g, t);
  }
  if (r.ret) out += "RETURN " + format_value(g, *r.ret) + "\n";
  return out;
}

}  // namespace gsql
