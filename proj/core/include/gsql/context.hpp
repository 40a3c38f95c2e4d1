#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gsql/accum.hpp"
#include "gsql/graph.hpp"
#include "gsql/value.hpp"

namespace gsql {

// Per-vertex accumulator instances, indexed by VertexId. Shared between a
// name and its primed twin until one of them is written.
using VertexAccums = std::shared_ptr<const std::vector<AccumValue>>;

using ContextEntry = std::variant<Value, AccumValue, VertexAccums>;

bool entries_equal(const ContextEntry& a, const ContextEntry& b);

// Immutable name -> value map. Extension returns a fresh context; the
// original is never observably modified.
class Context {
 public:
  Context() = default;

  Context override(const std::vector<std::pair<std::string, ContextEntry>>& updates) const;
  Context override(const std::string& name, ContextEntry entry) const;

  const ContextEntry* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  // Throws when absent or not a plain value.
  const Value& value(std::string_view name) const;
  std::size_t size() const { return entries_ ? entries_->size() : 0; }

  const std::map<std::string, ContextEntry, std::less<>>& entries() const;

 private:
  std::shared_ptr<const std::map<std::string, ContextEntry, std::less<>>> entries_;
};

struct MergeResult {
  std::optional<Context> merged;
  // First name on which two inputs disagree, when merged is empty.
  std::string conflict;
};

MergeResult consistent_merge(const std::vector<Context>& contexts);

// The term forms of the language, for reading directly against a context.
struct Term {
  enum class Kind { Constant, Var, Attr, GlobalAcc, VertexAcc, Type };
  Kind kind = Kind::Constant;
  Value constant;
  std::string var;
  // Attribute or accumulator name (without @ prefixes).
  std::string name;
  bool primed = false;
};

Value read_term(const Context& ctx, const Graph* g, const Term& term);

// Attribute of a bound element: vertex/edge attribute or table column.
Value read_attribute(const Graph* g, const Value& element, std::string_view attr);

// A bag of bindings over a fixed variable list, each with multiplicity >= 1.
class BindingTable {
 public:
  BindingTable() = default;
  explicit BindingTable(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  const std::vector<std::string>& vars() const { return vars_; }
  int var_index(std::string_view var) const;
  std::size_t width() const { return vars_.size(); }
  std::size_t size() const { return mult_.size(); }
  bool empty() const { return mult_.empty(); }

  std::span<const Value> row(std::size_t i) const {
    return {cells_.data() + i * vars_.size(), vars_.size()};
  }
  std::uint64_t multiplicity(std::size_t i) const { return mult_[i]; }
  std::uint64_t total_multiplicity() const;

  void add(std::span<const Value> row, std::uint64_t mult);
  void reserve(std::size_t rows);
  void append(const BindingTable& other);

  // Rows keep their relative order; multiplicities are preserved.
  BindingTable filter(const std::vector<bool>& keep) const;

 private:
  std::vector<std::string> vars_;
  std::vector<Value> cells_;
  std::vector<std::uint64_t> mult_;
};

// Natural join on shared variables; multiplicities multiply.
BindingTable join(const BindingTable& a, const BindingTable& b);

// Adds a CSV table under table_name; throws when the name is taken.
Context load_table_csv(const Context& ctx, const std::string& path, const std::string& table_name);

}  // namespace gsql
