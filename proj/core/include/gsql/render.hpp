#pragma once

#include <string>

#include "gsql/evaluator.hpp"
#include "gsql/graph.hpp"
#include "gsql/value.hpp"

namespace gsql {

// Plain text for one cell. Vertices print as their primary key, edges as
// Type(src,tgt), NULL as "NULL". g may be null (vertices then print as #id).
std::string format_value(const Graph* g, const Value& v);

// JSON text for one value. Sets, bags and lists become arrays, maps objects
// when every key is a string and [key, value] pairs otherwise.
std::string value_json(const Graph* g, const Value& v);

// Header line then one line per row, tab separated.
std::string table_tsv(const Graph* g, const Table& t);
// Columns padded to a common width.
std::string table_text(const Graph* g, const Table& t);
// Array of row objects keyed by column name.
std::string table_json(const Graph* g, const Table& t, int indent = -1);

// {"tables": {...}, "return": ..., "warnings": [...]}.
std::string result_json(const Graph* g, const QueryResult& r, int indent = -1);
// Tables as aligned text under "name:" headings, then "RETURN <value>".
std::string result_text(const Graph* g, const QueryResult& r);

}  // namespace gsql
