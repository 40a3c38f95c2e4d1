#include "gsql/accum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gsql {

namespace {

std::string_view scalar_name(ScalarKind k) {
  switch (k) {
    case ScalarKind::Int:
      return "int";
    case ScalarKind::UInt:
      return "uint";
    case ScalarKind::Float:
      return "float";
    case ScalarKind::Double:
      return "double";
    case ScalarKind::String:
      return "string";
    case ScalarKind::Bool:
      return "bool";
    case ScalarKind::Datetime:
      return "datetime";
    case ScalarKind::Vertex:
      return "vertex";
    case ScalarKind::Edge:
      return "edge";
    case ScalarKind::Tuple:
      return "tuple";
  }
  return "?";
}

[[noreturn]] void mismatch(const std::string& expected, const Value& v) {
  fail(ErrorKind::Runtime, "type mismatch: expected " + expected + ", got " + to_debug_string(v));
}

Value coerce_scalar(ScalarKind k, const Value& v) {
  switch (k) {
    case ScalarKind::Int:
      if (v.is_int()) return v;
      break;
    case ScalarKind::UInt:
      if (v.is_int() && v.as_int() >= 0) return v;
      break;
    case ScalarKind::Float:
    case ScalarKind::Double:
      if (v.is_numeric()) return Value(v.as_number());
      break;
    case ScalarKind::String:
      if (v.is_string()) return v;
      break;
    case ScalarKind::Bool:
      if (v.is_bool()) return v;
      break;
    case ScalarKind::Datetime:
      if (v.is_datetime()) return v;
      if (v.is_string()) return Value(parse_datetime(v.as_string()));
      break;
    case ScalarKind::Vertex:
      if (v.is_vertex()) return v;
      break;
    case ScalarKind::Edge:
      if (v.is_edge()) return v;
      break;
    case ScalarKind::Tuple:
      break;
  }
  mismatch(std::string(scalar_name(k)), v);
}

// Writable access to a shared payload, copying it when it is not uniquely owned.
template <typename T>
T& detach(std::shared_ptr<const T>& p) {
  if (!p) {
    auto fresh = std::make_shared<T>();
    T& ref = *fresh;
    p = std::move(fresh);
    return ref;
  }
  if (p.use_count() > 1) {
    auto fresh = std::make_shared<T>(*p);
    T& ref = *fresh;
    p = std::move(fresh);
    return ref;
  }
  return const_cast<T&>(*p);
}

bool is_plain_collection(const Value& v) {
  if (!v.is_collection()) return false;
  auto k = v.as_collection().kind;
  return k == CollectionKind::Set || k == CollectionKind::Bag || k == CollectionKind::List;
}

struct HeapLess {
  const std::vector<HeapKey>* order;
  bool operator()(const Value& a, const Value& b) const {
    const auto& x = a.as_collection().items;
    const auto& y = b.as_collection().items;
    for (const auto& key : *order) {
      int c = compare(x[key.field], y[key.field]);
      if (c != 0) return key.descending ? c > 0 : c < 0;
    }
    return compare(a, b) < 0;
  }
};

void insert_item(const AccSpec& spec, AccumValue& acc, Value item) {
  switch (spec.kind) {
    case AccKind::Set: {
      auto& items = detach(acc.items);
      auto it = std::lower_bound(items.begin(), items.end(), item, ValueLess());
      if (it == items.end() || compare(*it, item) != 0) items.insert(it, std::move(item));
      return;
    }
    case AccKind::Bag: {
      auto& items = detach(acc.items);
      auto it = std::upper_bound(items.begin(), items.end(), item, ValueLess());
      items.insert(it, std::move(item));
      return;
    }
    case AccKind::List:
      detach(acc.items).push_back(std::move(item));
      return;
    case AccKind::Heap: {
      auto& items = detach(acc.items);
      HeapLess less{&spec.heap_order};
      auto it = std::upper_bound(items.begin(), items.end(), item, less);
      if (static_cast<std::int64_t>(it - items.begin()) >= acc.capacity) return;
      items.insert(it, std::move(item));
      if (static_cast<std::int64_t>(items.size()) > acc.capacity) items.resize(acc.capacity);
      return;
    }
    default:
      break;
  }
}

void map_put(const AccSpec& spec, AccumValue& acc, const Value& key, const Value& value) {
  Value k = coerce_elem(spec.elem, key);
  auto& state = detach(acc.map);
  if (spec.map_value_acc) {
    auto it = state.nested.find(k);
    if (it == state.nested.end()) {
      it = state.nested.emplace(k, default_value(*spec.map_value_acc)).first;
    }
    combine_into(*spec.map_value_acc, it->second, value);
  } else {
    state.base[k] = coerce_elem(*spec.map_value_base, value);
  }
}

}  // namespace

bool is_numeric(ScalarKind k) {
  return k == ScalarKind::Int || k == ScalarKind::UInt || k == ScalarKind::Float ||
         k == ScalarKind::Double;
}

std::string elem_type_name(const ElemType& t) {
  if (t.kind == ScalarKind::Tuple) {
    std::string out = "Tuple<";
    for (std::size_t i = 0; i < t.fields.size(); ++i) {
      if (i) out += ", ";
      out += std::string(scalar_name(t.fields[i].first)) + " " + t.fields[i].second;
    }
    return out + ">";
  }
  std::string out(scalar_name(t.kind));
  if (!t.type_name.empty()) out += "<" + t.type_name + ">";
  return out;
}

std::string acc_kind_name(AccKind k) {
  switch (k) {
    case AccKind::Sum:
      return "SumAccum";
    case AccKind::Min:
      return "MinAccum";
    case AccKind::Max:
      return "MaxAccum";
    case AccKind::Avg:
      return "AvgAccum";
    case AccKind::Or:
      return "OrAccum";
    case AccKind::And:
      return "AndAccum";
    case AccKind::Set:
      return "SetAccum";
    case AccKind::Bag:
      return "BagAccum";
    case AccKind::List:
      return "ListAccum";
    case AccKind::Map:
      return "MapAccum";
    case AccKind::Heap:
      return "HeapAccum";
    case AccKind::Array:
      return "ArrayAccum";
    case AccKind::GroupBy:
      return "GroupByAccum";
    case AccKind::BitwiseOr:
      return "BitwiseOrAccum";
    case AccKind::BitwiseAnd:
      return "BitwiseAndAccum";
  }
  return "?";
}

bool acc_kind_supported(AccKind k) {
  return k != AccKind::Array && k != AccKind::GroupBy && k != AccKind::BitwiseOr &&
         k != AccKind::BitwiseAnd;
}

std::string acc_spec_name(const AccSpec& spec) {
  std::string out = acc_kind_name(spec.kind);
  switch (spec.kind) {
    case AccKind::Or:
    case AccKind::And:
    case AccKind::BitwiseOr:
    case AccKind::BitwiseAnd:
      return out;
    case AccKind::Map:
      return out + "<" + elem_type_name(spec.elem) + ", " +
             (spec.map_value_acc ? acc_spec_name(*spec.map_value_acc)
                                 : elem_type_name(*spec.map_value_base)) +
             ">";
    default:
      return out + "<" + elem_type_name(spec.elem) + ">";
  }
}

Value coerce_elem(const ElemType& t, const Value& v) {
  if (t.kind != ScalarKind::Tuple) return coerce_scalar(t.kind, v);
  if (!v.is_collection() || v.as_collection().kind != CollectionKind::Tuple ||
      v.as_collection().items.size() != t.fields.size())
    mismatch(elem_type_name(t), v);
  std::vector<Value> items;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < t.fields.size(); ++i) {
    items.push_back(coerce_scalar(t.fields[i].first, v.as_collection().items[i]));
    names.push_back(t.fields[i].second);
  }
  return make_tuple(std::move(items), std::move(names));
}

AccumValue default_value(const AccSpec& spec, std::int64_t capacity) {
  if (!acc_kind_supported(spec.kind))
    fail(ErrorKind::Semantic, acc_kind_name(spec.kind) + " is not supported");
  AccumValue acc;
  acc.kind = spec.kind;
  const ScalarKind k = spec.elem.kind;
  switch (spec.kind) {
    case AccKind::Sum:
      if (k == ScalarKind::String) {
        acc.scalar = Value(std::string());
      } else if (k == ScalarKind::Float || k == ScalarKind::Double) {
        acc.scalar = Value(0.0);
      } else {
        acc.scalar = Value(std::int64_t{0});
      }
      break;
    case AccKind::Min:
      if (k == ScalarKind::Int || k == ScalarKind::UInt) {
        acc.scalar = Value(std::numeric_limits<std::int64_t>::max());
      } else if (k == ScalarKind::Float || k == ScalarKind::Double) {
        acc.scalar = Value(std::numeric_limits<double>::infinity());
      } else if (k == ScalarKind::Datetime) {
        acc.scalar = Value(Datetime{std::numeric_limits<std::int64_t>::max()});
      }
      break;
    case AccKind::Max:
      if (k == ScalarKind::Int) {
        acc.scalar = Value(std::numeric_limits<std::int64_t>::min());
      } else if (k == ScalarKind::UInt) {
        acc.scalar = Value(std::int64_t{0});
      } else if (k == ScalarKind::Float || k == ScalarKind::Double) {
        acc.scalar = Value(-std::numeric_limits<double>::infinity());
      } else if (k == ScalarKind::String) {
        acc.scalar = Value(std::string());
      } else if (k == ScalarKind::Datetime) {
        acc.scalar = Value(Datetime{std::numeric_limits<std::int64_t>::min()});
      }
      break;
    case AccKind::Or:
      acc.scalar = Value(false);
      break;
    case AccKind::And:
      acc.scalar = Value(true);
      break;
    case AccKind::Heap:
      if (capacity <= 0) fail(ErrorKind::Runtime, "HeapAccum capacity must be positive");
      acc.capacity = capacity;
      break;
    default:
      break;
  }
  return acc;
}

void combine_into(const AccSpec& spec, AccumValue& acc, const Value& input) {
  switch (spec.kind) {
    case AccKind::Sum: {
      Value x = coerce_elem(spec.elem, input);
      if (x.is_string()) {
        acc.scalar = Value(acc.scalar.as_string() + x.as_string());
      } else if (x.is_int() && acc.scalar.is_int()) {
        acc.scalar = Value(acc.scalar.as_int() + x.as_int());
      } else {
        acc.scalar = Value(acc.scalar.as_number() + x.as_number());
      }
      return;
    }
    case AccKind::Min:
    case AccKind::Max: {
      Value x = coerce_elem(spec.elem, input);
      if (acc.scalar.is_null()) {
        acc.scalar = std::move(x);
        return;
      }
      int c = compare(x, acc.scalar);
      if (spec.kind == AccKind::Min ? c < 0 : c > 0) acc.scalar = std::move(x);
      return;
    }
    case AccKind::Avg: {
      if (!input.is_numeric()) mismatch("number", input);
      acc.avg.sum += input.as_number();
      acc.avg.count += 1;
      return;
    }
    case AccKind::Or:
    case AccKind::And: {
      if (!input.is_bool()) mismatch("bool", input);
      bool cur = acc.scalar.as_bool();
      acc.scalar = Value(spec.kind == AccKind::Or ? (cur || input.as_bool()) : (cur && input.as_bool()));
      return;
    }
    case AccKind::Set:
    case AccKind::Bag:
    case AccKind::List:
    case AccKind::Heap:
      if (is_plain_collection(input)) {
        for (const auto& item : input.as_collection().items) {
          insert_item(spec, acc, coerce_elem(spec.elem, item));
        }
      } else {
        insert_item(spec, acc, coerce_elem(spec.elem, input));
      }
      return;
    case AccKind::Map:
      if (input.is_collection() && input.as_collection().kind == CollectionKind::MapEntry) {
        const auto& kv = input.as_collection().items;
        map_put(spec, acc, kv[0], kv[1]);
      } else if (input.is_map()) {
        for (const auto& [k, v] : input.as_map().entries) map_put(spec, acc, k, v);
      } else {
        mismatch("map entry (k -> v)", input);
      }
      return;
    default:
      fail(ErrorKind::Semantic, acc_kind_name(spec.kind) + " is not supported");
  }
}

AccumValue combine(const AccSpec& spec, const AccumValue& current, const Value& input) {
  AccumValue out = current;
  combine_into(spec, out, input);
  return out;
}

bool needs_sorted_fold(const AccSpec& spec) {
  switch (spec.kind) {
    case AccKind::Sum:
      return spec.elem.kind == ScalarKind::Float || spec.elem.kind == ScalarKind::Double;
    case AccKind::Avg:
    case AccKind::Map:
      return true;
    default:
      return false;
  }
}

AccumValue reduce_bag(const AccSpec& spec, const AccumValue& start, std::span<const Value> inputs) {
  AccumValue out = start;
  if (needs_sorted_fold(spec)) {
    std::vector<Value> sorted(inputs.begin(), inputs.end());
    std::sort(sorted.begin(), sorted.end(), ValueLess{});
    for (const auto& v : sorted) combine_into(spec, out, v);
    return out;
  }
  for (const auto& v : inputs) combine_into(spec, out, v);
  return out;
}

AccumValue assign_value(const AccSpec& spec, const AccumValue& current, const Value& v) {
  AccumValue out = default_value(spec, current.capacity);
  switch (spec.kind) {
    case AccKind::Sum:
    case AccKind::Min:
    case AccKind::Max:
      out.scalar = coerce_elem(spec.elem, v);
      return out;
    case AccKind::Or:
    case AccKind::And:
      if (!v.is_bool()) mismatch("bool", v);
      out.scalar = v;
      return out;
    case AccKind::Avg:
      if (!v.is_numeric()) mismatch("number", v);
      out.avg = AvgState{v.as_number(), 1};
      return out;
    default:
      combine_into(spec, out, v);
      return out;
  }
}

Value read_accum(const AccumValue& acc) {
  switch (acc.kind) {
    case AccKind::Avg:
      return Value(acc.avg.count == 0 ? 0.0 : acc.avg.sum / static_cast<double>(acc.avg.count));
    case AccKind::Set:
    case AccKind::Bag:
    case AccKind::List:
    case AccKind::Heap: {
      auto c = std::make_shared<Collection>();
      c->kind = acc.kind == AccKind::Set   ? CollectionKind::Set
                : acc.kind == AccKind::Bag ? CollectionKind::Bag
                                           : CollectionKind::List;
      if (acc.items) c->items = *acc.items;
      return Value(std::shared_ptr<const Collection>(std::move(c)));
    }
    case AccKind::Map: {
      auto m = std::make_shared<MapValue>();
      if (acc.map) {
        for (const auto& [k, v] : acc.map->base) m->entries.emplace_back(k, v);
        for (const auto& [k, v] : acc.map->nested) m->entries.emplace_back(k, read_accum(v));
      }
      return Value(std::shared_ptr<const MapValue>(std::move(m)));
    }
    default:
      return acc.scalar;
  }
}

namespace {

bool same_items(const std::shared_ptr<const std::vector<Value>>& a,
                const std::shared_ptr<const std::vector<Value>>& b) {
  std::size_t na = a ? a->size() : 0, nb = b ? b->size() : 0;
  if (na != nb) return false;
  for (std::size_t i = 0; i < na; ++i) {
    if (compare((*a)[i], (*b)[i]) != 0) return false;
  }
  return true;
}

bool same_map(const std::shared_ptr<const MapState>& a, const std::shared_ptr<const MapState>& b) {
  static const MapState empty;
  const MapState& x = a ? *a : empty;
  const MapState& y = b ? *b : empty;
  if (x.base.size() != y.base.size() || x.nested.size() != y.nested.size()) return false;
  for (auto i = x.base.begin(), j = y.base.begin(); i != x.base.end(); ++i, ++j) {
    if (compare(i->first, j->first) != 0 || compare(i->second, j->second) != 0) return false;
  }
  for (auto i = x.nested.begin(), j = y.nested.begin(); i != x.nested.end(); ++i, ++j) {
    if (compare(i->first, j->first) != 0 || !(i->second == j->second)) return false;
  }
  return true;
}

}  // namespace

bool operator==(const AccumValue& a, const AccumValue& b) {
  if (a.kind != b.kind || a.capacity != b.capacity) return false;
  if (a.scalar.storage().index() != b.scalar.storage().index()) return false;
  if (compare(a.scalar, b.scalar) != 0) return false;
  if (!(a.avg == b.avg)) return false;
  return same_items(a.items, b.items) && same_map(a.map, b.map);
}

}  // namespace gsql
