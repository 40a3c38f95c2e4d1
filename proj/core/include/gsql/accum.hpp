#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gsql/value.hpp"

namespace gsql {

enum class ScalarKind { Int, UInt, Float, Double, String, Bool, Datetime, Vertex, Edge, Tuple };

struct ElemType {
  ScalarKind kind = ScalarKind::Int;
  // vertex<T> / edge<T> restriction, empty when unrestricted.
  std::string type_name;
  // Tuple fields (scalar, non-tuple).
  std::vector<std::pair<ScalarKind, std::string>> fields;

  bool operator==(const ElemType&) const = default;
};

std::string elem_type_name(const ElemType& t);
bool is_numeric(ScalarKind k);

enum class AccKind {
  Sum,
  Min,
  Max,
  Avg,
  Or,
  And,
  Set,
  Bag,
  List,
  Map,
  Heap,
  Array,
  GroupBy,
  BitwiseOr,
  BitwiseAnd
};

std::string acc_kind_name(AccKind k);
bool acc_kind_supported(AccKind k);

struct HeapKey {
  int field = 0;
  bool descending = false;
};

struct AccSpec {
  AccKind kind = AccKind::Sum;
  // Element type for Sum/Min/Max/Avg/Set/Bag/List/Heap, key type for Map.
  ElemType elem;
  // Map value: either a nested accumulator or a base type.
  std::shared_ptr<const AccSpec> map_value_acc;
  std::optional<ElemType> map_value_base;
  std::vector<HeapKey> heap_order;
};

std::string acc_spec_name(const AccSpec& spec);

struct AvgState {
  double sum = 0.0;
  std::int64_t count = 0;
  bool operator==(const AvgState&) const = default;
};

struct MapState;

// Internal state of one accumulator instance. Container payloads are shared
// and copied on first write.
struct AccumValue {
  AccKind kind = AccKind::Sum;
  // Sum/Min/Max/Or/And. Null for a Min/Max over a type without sentinel that
  // has not received input.
  Value scalar;
  AvgState avg;
  // Set (sorted, unique), Bag (sorted), List (insertion order), Heap (spec order).
  std::shared_ptr<const std::vector<Value>> items;
  std::shared_ptr<const MapState> map;
  std::int64_t capacity = 0;
};

struct MapState {
  // Exactly one of the two is used, depending on the AccSpec map value type.
  std::map<Value, Value, ValueLess> base;
  std::map<Value, AccumValue, ValueLess> nested;
};

bool operator==(const AccumValue& a, const AccumValue& b);

// Throws for unsupported kinds. capacity is used by Heap only.
AccumValue default_value(const AccSpec& spec, std::int64_t capacity = 0);

// Returns current (+) input.
AccumValue combine(const AccSpec& spec, const AccumValue& current, const Value& input);
// In-place variant used by folds; detaches shared payloads first.
void combine_into(const AccSpec& spec, AccumValue& acc, const Value& input);
// Folds in ascending value order when needs_sorted_fold(spec), so the result
// is the same for every order of the bag.
AccumValue reduce_bag(const AccSpec& spec, const AccumValue& start, std::span<const Value> inputs);

// Floating-point Sum and Avg, and Maps, give bit-identical results for every
// input order only when their inputs are folded in a fixed order.
bool needs_sorted_fold(const AccSpec& spec);
// Direct assignment `A = v`.
AccumValue assign_value(const AccSpec& spec, const AccumValue& current, const Value& v);

// The value an accumulator reads as (Avg divides, containers become collections).
Value read_accum(const AccumValue& acc);

// Coerces a value to an element type; throws on mismatch.
Value coerce_elem(const ElemType& t, const Value& v);

}  // namespace gsql
