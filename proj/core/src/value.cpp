#include "gsql/value.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace gsql {

Error::Error(ErrorKind kind, const std::string& message, SourcePos pos)
    : std::runtime_error(pos.line > 0 ? std::to_string(pos.line) + ":" +
                                            std::to_string(pos.column) + ": " + message
                                      : message),
      kind_(kind),
      pos_(pos),
      message_(message) {}

void fail(ErrorKind kind, const std::string& message, SourcePos pos) {
  throw Error(kind, message, pos);
}

namespace {

bool parse_fixed(std::string_view text, std::size_t pos, std::size_t len, int* out) {
  if (pos + len > text.size()) return false;
  auto* first = text.data() + pos;
  auto res = std::from_chars(first, first + len, *out);
  return res.ec == std::errc() && res.ptr == first + len;
}

}  // namespace

bool try_parse_datetime(std::string_view text, Datetime* out) {
  // YYYY-MM-DD, optionally followed by ' ' or 'T' and HH:MM[:SS].
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return false;
  if (!parse_fixed(text, 0, 4, &y) || !parse_fixed(text, 5, 2, &mo) ||
      !parse_fixed(text, 8, 2, &d))
    return false;
  if (text.size() > 10) {
    if ((text[10] != ' ' && text[10] != 'T') || text.size() < 16 || text[13] != ':') return false;
    if (!parse_fixed(text, 11, 2, &h) || !parse_fixed(text, 14, 2, &mi)) return false;
    if (text.size() > 16) {
      if (text.size() != 19 || text[16] != ':' || !parse_fixed(text, 17, 2, &s)) return false;
    }
  }
  using namespace std::chrono;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) return false;
  auto days = sys_days(ymd).time_since_epoch().count();
  out->seconds = static_cast<std::int64_t>(days) * 86400 + h * 3600 + mi * 60 + s;
  return true;
}

Datetime parse_datetime(std::string_view text) {
  Datetime dt;
  if (!try_parse_datetime(text, &dt))
    fail(ErrorKind::Runtime, "invalid datetime '" + std::string(text) + "'");
  return dt;
}

namespace {

std::chrono::year_month_day to_ymd(Datetime dt, std::int64_t* secs_of_day) {
  using namespace std::chrono;
  std::int64_t days = dt.seconds / 86400;
  std::int64_t rem = dt.seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  *secs_of_day = rem;
  return year_month_day{sys_days{std::chrono::days{days}}};
}

}  // namespace

std::string format_datetime(Datetime dt) {
  std::int64_t rem = 0;
  auto ymd = to_ymd(dt, &rem);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                static_cast<int>(rem % 60));
  return buf;
}

int datetime_year(Datetime dt) {
  std::int64_t rem = 0;
  return static_cast<int>(to_ymd(dt, &rem).year());
}

double Value::as_number() const {
  if (is_int()) return static_cast<double>(as_int());
  return as_double();
}

const Collection& Value::as_collection() const {
  return *std::get<std::shared_ptr<const Collection>>(v_);
}
const MapValue& Value::as_map() const { return *std::get<std::shared_ptr<const MapValue>>(v_); }
const VertexSet& Value::as_vertex_set() const {
  return *std::get<std::shared_ptr<const VertexSet>>(v_);
}
const Table& Value::as_table() const { return *std::get<std::shared_ptr<const Table>>(v_); }

namespace {

// Kind rank for the total order; int and double share a rank.
int rank(const Value& v) {
  std::size_t idx = v.storage().index();
  if (idx >= 3) return static_cast<int>(idx) - 1;
  return static_cast<int>(idx == 3 ? 2 : idx);
}

template <typename T>
int cmp3(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

int compare_numbers(const Value& a, const Value& b) {
  if (a.is_int() && b.is_int()) return cmp3(a.as_int(), b.as_int());
  double x = a.as_number(), y = b.as_number();
  if (std::isnan(x) || std::isnan(y)) return cmp3(std::isnan(x), std::isnan(y));
  return cmp3(x, y);
}

int compare_seq(const std::vector<Value>& a, const std::vector<Value>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a[i], b[i]);
    if (c != 0) return c;
  }
  return cmp3(a.size(), b.size());
}

}  // namespace

int compare(const Value& a, const Value& b) {
  if (a.is_numeric() && b.is_numeric()) return compare_numbers(a, b);
  int ra = rank(a), rb = rank(b);
  if (ra != rb) return cmp3(ra, rb);
  switch (a.storage().index()) {
    case 0:
      return 0;
    case 1:
      return cmp3(a.as_bool(), b.as_bool());
    case 4:
      return a.as_string().compare(b.as_string()) < 0
                 ? -1
                 : (a.as_string() == b.as_string() ? 0 : 1);
    case 5:
      return cmp3(a.as_datetime(), b.as_datetime());
    case 6:
      return cmp3(a.as_vertex(), b.as_vertex());
    case 7:
      return cmp3(a.as_edge(), b.as_edge());
    case 8: {
      const auto& x = a.as_row();
      const auto& y = b.as_row();
      if (x.table != y.table) return cmp3(x.table.get(), y.table.get());
      return cmp3(x.row, y.row);
    }
    case 9: {
      const auto& x = a.as_collection();
      const auto& y = b.as_collection();
      if (x.kind != y.kind) return cmp3(x.kind, y.kind);
      return compare_seq(x.items, y.items);
    }
    case 10: {
      const auto& x = a.as_map().entries;
      const auto& y = b.as_map().entries;
      std::size_t n = std::min(x.size(), y.size());
      for (std::size_t i = 0; i < n; ++i) {
        int c = compare(x[i].first, y[i].first);
        if (c == 0) c = compare(x[i].second, y[i].second);
        if (c != 0) return c;
      }
      return cmp3(x.size(), y.size());
    }
    case 11: {
      const auto& x = a.as_vertex_set().members();
      const auto& y = b.as_vertex_set().members();
      if (x.size() != y.size()) return cmp3(x.size(), y.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] != y[i]) return cmp3(x[i], y[i]);
      }
      return 0;
    }
    case 12:
      return cmp3(&a.as_table(), &b.as_table());
  }
  return 0;
}

bool ValueVectorLess::operator()(const std::vector<Value>& a, const std::vector<Value>& b) const {
  return compare_seq(a, b) < 0;
}

std::shared_ptr<const VertexSet> VertexSet::from_unique(std::vector<VertexId> members) {
  auto set = std::make_shared<VertexSet>();
  set->sorted_ = members;
  std::sort(set->sorted_.begin(), set->sorted_.end());
  set->members_ = std::move(members);
  return set;
}

std::shared_ptr<const VertexSet> VertexSet::from_any(const std::vector<VertexId>& members) {
  std::vector<VertexId> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<VertexId> ordered;
  ordered.reserve(sorted.size());
  std::vector<bool> seen(sorted.size(), false);
  for (VertexId v : members) {
    auto pos = std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin();
    if (!seen[pos]) {
      seen[pos] = true;
      ordered.push_back(v);
    }
  }
  auto set = std::make_shared<VertexSet>();
  set->members_ = std::move(ordered);
  set->sorted_ = std::move(sorted);
  return set;
}

bool VertexSet::contains(VertexId v) const {
  return std::binary_search(sorted_.begin(), sorted_.end(), v);
}

int Table::column_index(std::string_view column) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == column) return static_cast<int>(i);
  }
  return -1;
}

Value make_collection(CollectionKind kind, std::vector<Value> items) {
  auto c = std::make_shared<Collection>();
  c->kind = kind;
  if (kind == CollectionKind::Set || kind == CollectionKind::Bag) {
    std::sort(items.begin(), items.end(), ValueLess());
    if (kind == CollectionKind::Set) {
      items.erase(std::unique(items.begin(), items.end()), items.end());
    }
  }
  c->items = std::move(items);
  return Value(std::shared_ptr<const Collection>(std::move(c)));
}

Value make_tuple(std::vector<Value> items, std::vector<std::string> fields) {
  auto c = std::make_shared<Collection>();
  c->kind = CollectionKind::Tuple;
  c->items = std::move(items);
  c->fields = std::move(fields);
  return Value(std::shared_ptr<const Collection>(std::move(c)));
}

Value make_map(std::vector<std::pair<Value, Value>> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
  // Last duplicate wins.
  std::vector<std::pair<Value, Value>> unique;
  for (auto& e : entries) {
    if (!unique.empty() && unique.back().first == e.first) {
      unique.back().second = std::move(e.second);
    } else {
      unique.push_back(std::move(e));
    }
  }
  auto m = std::make_shared<MapValue>();
  m->entries = std::move(unique);
  return Value(std::shared_ptr<const MapValue>(std::move(m)));
}

std::string format_double(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

std::string to_debug_string(const Value& v) {
  switch (v.storage().index()) {
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
      return "#" + std::to_string(v.as_vertex().value);
    case 7:
      return "e#" + std::to_string(v.as_edge().value);
    case 8:
      return v.as_row().table->name + "[" + std::to_string(v.as_row().row) + "]";
    case 9: {
      const auto& c = v.as_collection();
      std::string open = c.kind == CollectionKind::Tuple ? "(" : "[";
      std::string close = c.kind == CollectionKind::Tuple ? ")" : "]";
      std::string sep = c.kind == CollectionKind::MapEntry ? " -> " : ", ";
      std::string out = open;
      for (std::size_t i = 0; i < c.items.size(); ++i) {
        if (i) out += sep;
        out += to_debug_string(c.items[i]);
      }
      return out + close;
    }
    case 10: {
      std::string out = "{";
      bool first = true;
      for (const auto& [k, val] : v.as_map().entries) {
        if (!first) out += ", ";
        first = false;
        out += to_debug_string(k) + ": " + to_debug_string(val);
      }
      return out + "}";
    }
    case 11: {
      std::string out = "{";
      bool first = true;
      for (VertexId m : v.as_vertex_set().members()) {
        if (!first) out += ", ";
        first = false;
        out += "#" + std::to_string(m.value);
      }
      return out + "}";
    }
    case 12:
      return "table " + v.as_table().name;
  }
  return "?";
}

}  // namespace gsql
