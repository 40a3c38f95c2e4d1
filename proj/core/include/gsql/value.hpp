#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace gsql {

struct SourcePos {
  int line = 0;
  int column = 0;
};

enum class ErrorKind { Lex, Parse, Semantic, Catalog, Load, Runtime, Io, Usage };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, SourcePos pos = {});

  ErrorKind kind() const { return kind_; }
  SourcePos pos() const { return pos_; }
  const std::string& message() const { return message_; }

 private:
  ErrorKind kind_;
  SourcePos pos_;
  std::string message_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message, SourcePos pos = {});

struct VertexId {
  std::uint32_t value = 0;
  auto operator<=>(const VertexId&) const = default;
};

struct EdgeId {
  std::uint32_t value = 0;
  auto operator<=>(const EdgeId&) const = default;
};

// Seconds since 1970-01-01 00:00:00 UTC.
struct Datetime {
  std::int64_t seconds = 0;
  auto operator<=>(const Datetime&) const = default;
};

Datetime parse_datetime(std::string_view text);
bool try_parse_datetime(std::string_view text, Datetime* out);
std::string format_datetime(Datetime dt);
int datetime_year(Datetime dt);

struct Table;
struct Collection;
struct MapValue;
class VertexSet;

struct RowRef {
  std::shared_ptr<const Table> table;
  std::size_t row = 0;
};

class Value {
 public:
  using Storage =
      std::variant<std::monostate, bool, std::int64_t, double, std::string, Datetime, VertexId,
                   EdgeId, RowRef, std::shared_ptr<const Collection>,
                   std::shared_ptr<const MapValue>, std::shared_ptr<const VertexSet>,
                   std::shared_ptr<const Table>>;

  Value() = default;
  Value(bool b) : v_(b) {}
  Value(int i) : v_(std::int64_t{i}) {}
  Value(std::int64_t i) : v_(i) {}
  Value(double d) : v_(d) {}
  Value(std::string s) : v_(std::move(s)) {}
  Value(const char* s) : v_(std::string(s)) {}
  Value(Datetime d) : v_(d) {}
  Value(VertexId v) : v_(v) {}
  Value(EdgeId e) : v_(e) {}
  Value(RowRef r) : v_(std::move(r)) {}
  Value(std::shared_ptr<const Collection> c) : v_(std::move(c)) {}
  Value(std::shared_ptr<const MapValue> m) : v_(std::move(m)) {}
  Value(std::shared_ptr<const VertexSet> s) : v_(std::move(s)) {}
  Value(std::shared_ptr<const Table> t) : v_(std::move(t)) {}

  bool is_null() const { return std::holds_alternative<std::monostate>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_double() const { return std::holds_alternative<double>(v_); }
  bool is_numeric() const { return is_int() || is_double(); }
  bool is_string() const { return std::holds_alternative<std::string>(v_); }
  bool is_datetime() const { return std::holds_alternative<Datetime>(v_); }
  bool is_vertex() const { return std::holds_alternative<VertexId>(v_); }
  bool is_edge() const { return std::holds_alternative<EdgeId>(v_); }
  bool is_row() const { return std::holds_alternative<RowRef>(v_); }
  bool is_collection() const {
    return std::holds_alternative<std::shared_ptr<const Collection>>(v_);
  }
  bool is_map() const { return std::holds_alternative<std::shared_ptr<const MapValue>>(v_); }
  bool is_vertex_set() const {
    return std::holds_alternative<std::shared_ptr<const VertexSet>>(v_);
  }
  bool is_table() const { return std::holds_alternative<std::shared_ptr<const Table>>(v_); }

  bool as_bool() const { return std::get<bool>(v_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  double as_double() const { return std::get<double>(v_); }
  // Int or double widened to double.
  double as_number() const;
  const std::string& as_string() const { return std::get<std::string>(v_); }
  Datetime as_datetime() const { return std::get<Datetime>(v_); }
  VertexId as_vertex() const { return std::get<VertexId>(v_); }
  EdgeId as_edge() const { return std::get<EdgeId>(v_); }
  const RowRef& as_row() const { return std::get<RowRef>(v_); }
  const Collection& as_collection() const;
  const MapValue& as_map() const;
  const VertexSet& as_vertex_set() const;
  const std::shared_ptr<const VertexSet>& vertex_set_ptr() const {
    return std::get<std::shared_ptr<const VertexSet>>(v_);
  }
  const Table& as_table() const;
  const std::shared_ptr<const Table>& table_ptr() const {
    return std::get<std::shared_ptr<const Table>>(v_);
  }

  const Storage& storage() const { return v_; }

 private:
  Storage v_;
};

// Total order used for sets, map keys, grouping and sorting. Int and double
// compare numerically; otherwise values order by kind first.
int compare(const Value& a, const Value& b);

inline bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }

struct ValueLess {
  bool operator()(const Value& a, const Value& b) const { return compare(a, b) < 0; }
};

struct ValueVectorLess {
  bool operator()(const std::vector<Value>& a, const std::vector<Value>& b) const;
};

enum class CollectionKind { Set, Bag, List, Tuple, MapEntry };

struct Collection {
  CollectionKind kind = CollectionKind::List;
  std::vector<Value> items;
  // Field names of a tuple, empty otherwise.
  std::vector<std::string> fields;
};

struct MapValue {
  // Sorted by key, keys unique.
  std::vector<std::pair<Value, Value>> entries;
};

// Duplicate-free vertex collection, kept in production order.
class VertexSet {
 public:
  static std::shared_ptr<const VertexSet> from_unique(std::vector<VertexId> members);
  static std::shared_ptr<const VertexSet> from_any(const std::vector<VertexId>& members);

  const std::vector<VertexId>& members() const { return members_; }
  bool contains(VertexId v) const;
  std::size_t size() const { return members_.size(); }

 private:
  std::vector<VertexId> members_;
  std::vector<VertexId> sorted_;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;

  int column_index(std::string_view column) const;
};

Value make_collection(CollectionKind kind, std::vector<Value> items);
Value make_tuple(std::vector<Value> items, std::vector<std::string> fields = {});
Value make_map(std::vector<std::pair<Value, Value>> entries);

// Plain-text rendering without graph context (vertices print as #id).
std::string to_debug_string(const Value& v);
std::string format_double(double d);

}  // namespace gsql
