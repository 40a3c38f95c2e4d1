#include "gsql/context.hpp"

#include <algorithm>

namespace gsql {

namespace {

using EntryMap = std::map<std::string, ContextEntry, std::less<>>;

const EntryMap& empty_entries() {
  static const EntryMap empty;
  return empty;
}

}  // namespace

bool entries_equal(const ContextEntry& a, const ContextEntry& b) {
  if (a.index() != b.index()) return false;
  if (const auto* v = std::get_if<Value>(&a)) return compare(*v, std::get<Value>(b)) == 0;
  if (const auto* acc = std::get_if<AccumValue>(&a)) return *acc == std::get<AccumValue>(b);
  const auto& x = std::get<VertexAccums>(a);
  const auto& y = std::get<VertexAccums>(b);
  if (x == y) return true;
  if (!x || !y || x->size() != y->size()) return false;
  for (std::size_t i = 0; i < x->size(); ++i) {
    if (!((*x)[i] == (*y)[i])) return false;
  }
  return true;
}

Context Context::override(const std::vector<std::pair<std::string, ContextEntry>>& updates) const {
  auto fresh = std::make_shared<EntryMap>(entries());
  for (const auto& [name, entry] : updates) (*fresh)[name] = entry;
  Context out;
  out.entries_ = std::move(fresh);
  return out;
}

Context Context::override(const std::string& name, ContextEntry entry) const {
  return override({{name, std::move(entry)}});
}

const ContextEntry* Context::find(std::string_view name) const {
  if (!entries_) return nullptr;
  auto it = entries_->find(name);
  return it == entries_->end() ? nullptr : &it->second;
}

const Value& Context::value(std::string_view name) const {
  const ContextEntry* e = find(name);
  if (!e) fail(ErrorKind::Runtime, "unknown name '" + std::string(name) + "'");
  const auto* v = std::get_if<Value>(e);
  if (!v) fail(ErrorKind::Runtime, "'" + std::string(name) + "' is not a value");
  return *v;
}

const EntryMap& Context::entries() const { return entries_ ? *entries_ : empty_entries(); }

MergeResult consistent_merge(const std::vector<Context>& contexts) {
  EntryMap merged;
  for (const auto& ctx : contexts) {
    for (const auto& [name, entry] : ctx.entries()) {
      auto it = merged.find(name);
      if (it == merged.end()) {
        merged.emplace(name, entry);
      } else if (!entries_equal(it->second, entry)) {
        return MergeResult{std::nullopt, name};
      }
    }
  }
  std::vector<std::pair<std::string, ContextEntry>> updates(merged.begin(), merged.end());
  return MergeResult{Context().override(updates), {}};
}

Value read_attribute(const Graph* g, const Value& element, std::string_view attr) {
  if (element.is_vertex()) return g->vertex_attr(element.as_vertex(), attr);
  if (element.is_edge()) return g->edge_attr(element.as_edge(), attr);
  if (element.is_row()) {
    const auto& ref = element.as_row();
    int idx = ref.table->column_index(attr);
    if (idx < 0)
      fail(ErrorKind::Runtime,
           "table '" + ref.table->name + "' has no column '" + std::string(attr) + "'");
    return ref.table->rows[ref.row][idx];
  }
  if (element.is_collection() && element.as_collection().kind == CollectionKind::Tuple) {
    const auto& c = element.as_collection();
    for (std::size_t i = 0; i < c.fields.size(); ++i) {
      if (c.fields[i] == attr) return c.items[i];
    }
  }
  fail(ErrorKind::Runtime, "cannot read attribute '" + std::string(attr) + "' of " +
                               to_debug_string(element));
}

Value read_term(const Context& ctx, const Graph* g, const Term& term) {
  switch (term.kind) {
    case Term::Kind::Constant:
      return term.constant;
    case Term::Kind::Var:
      return ctx.value(term.var);
    case Term::Kind::Attr:
      return read_attribute(g, ctx.value(term.var), term.name);
    case Term::Kind::Type: {
      const Value& x = ctx.value(term.var);
      if (x.is_vertex()) return Value(g->vertex_type_name(x.as_vertex()));
      if (x.is_edge()) return Value(g->edge_type_name(x.as_edge()));
      fail(ErrorKind::Runtime, "'" + term.var + "' is not bound to a vertex or edge");
    }
    case Term::Kind::GlobalAcc: {
      std::string key = "@@" + term.name + (term.primed ? "'" : "");
      const ContextEntry* e = ctx.find(key);
      const auto* acc = e ? std::get_if<AccumValue>(e) : nullptr;
      if (!acc) fail(ErrorKind::Runtime, "unknown accumulator '" + key + "'");
      return read_accum(*acc);
    }
    case Term::Kind::VertexAcc: {
      std::string key = "@" + term.name + (term.primed ? "'" : "");
      const ContextEntry* e = ctx.find(key);
      const auto* accs = e ? std::get_if<VertexAccums>(e) : nullptr;
      if (!accs) fail(ErrorKind::Runtime, "unknown accumulator '" + key + "'");
      const Value& x = ctx.value(term.var);
      if (!x.is_vertex()) fail(ErrorKind::Runtime, "'" + term.var + "' is not bound to a vertex");
      return read_accum((**accs)[x.as_vertex().value]);
    }
  }
  return {};
}

int BindingTable::var_index(std::string_view var) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i] == var) return static_cast<int>(i);
  }
  return -1;
}

std::uint64_t BindingTable::total_multiplicity() const {
  std::uint64_t n = 0;
  for (auto m : mult_) n += m;
  return n;
}

void BindingTable::add(std::span<const Value> row, std::uint64_t mult) {
  if (row.size() != vars_.size()) fail(ErrorKind::Runtime, "binding width mismatch");
  if (mult == 0) return;
  cells_.insert(cells_.end(), row.begin(), row.end());
  mult_.push_back(mult);
}

void BindingTable::reserve(std::size_t rows) {
  cells_.reserve(rows * vars_.size());
  mult_.reserve(rows);
}

void BindingTable::append(const BindingTable& other) {
  if (other.vars_ != vars_) fail(ErrorKind::Runtime, "binding variable mismatch");
  cells_.insert(cells_.end(), other.cells_.begin(), other.cells_.end());
  mult_.insert(mult_.end(), other.mult_.begin(), other.mult_.end());
}

BindingTable BindingTable::filter(const std::vector<bool>& keep) const {
  BindingTable out(vars_);
  for (std::size_t i = 0; i < size(); ++i) {
    if (keep[i]) out.add(row(i), mult_[i]);
  }
  return out;
}

BindingTable join(const BindingTable& a, const BindingTable& b) {
  std::vector<std::string> vars = a.vars();
  std::vector<std::pair<int, int>> shared;
  std::vector<int> b_only;
  for (std::size_t j = 0; j < b.vars().size(); ++j) {
    int i = a.var_index(b.vars()[j]);
    if (i >= 0) {
      shared.emplace_back(i, static_cast<int>(j));
    } else {
      b_only.push_back(static_cast<int>(j));
      vars.push_back(b.vars()[j]);
    }
  }
  BindingTable out(vars);
  // Hash side: b keyed by its shared columns, preserving b's row order per key.
  std::map<std::vector<Value>, std::vector<std::size_t>, ValueVectorLess> index;
  for (std::size_t r = 0; r < b.size(); ++r) {
    std::vector<Value> key;
    key.reserve(shared.size());
    for (auto [i, j] : shared) key.push_back(b.row(r)[j]);
    index[std::move(key)].push_back(r);
  }
  std::vector<Value> row;
  for (std::size_t r = 0; r < a.size(); ++r) {
    std::vector<Value> key;
    key.reserve(shared.size());
    for (auto [i, j] : shared) key.push_back(a.row(r)[i]);
    auto it = index.find(key);
    if (it == index.end()) continue;
    for (std::size_t rb : it->second) {
      row.assign(a.row(r).begin(), a.row(r).end());
      for (int j : b_only) row.push_back(b.row(rb)[j]);
      out.add(row, a.multiplicity(r) * b.multiplicity(rb));
    }
  }
  return out;
}

Context load_table_csv(const Context& ctx, const std::string& path, const std::string& table_name) {
  if (ctx.contains(table_name))
    fail(ErrorKind::Load, "table '" + table_name + "' already exists");
  auto table = std::make_shared<const Table>(read_table_csv(path, table_name));
  return ctx.override(table_name, Value(std::shared_ptr<const Table>(table)));
}

}  // namespace gsql
