#pragma once

#include <cstddef>
#include <vector>

#include "gsql/ast.hpp"
#include "gsql/graph.hpp"

namespace gsql {

enum class Legality { AllShortest, NoRepeatVertex, NoRepeatEdge, Unrestricted };

struct Path {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;

  bool operator==(const Path&) const = default;
};

// Exhaustive enumeration of the s -> t paths whose label satisfies d, filtered
// by the legality rule. Works on the expression itself (derivatives), not on
// a compiled automaton, so it can serve as a reference for match_darpe.
// Unrestricted mode lists every path up to max_length hops. Throws for views
// with more than 20 vertices.
std::vector<Path> enumerate_legal_paths(const GraphView& view, const Darpe& d, VertexId s,
                                        VertexId t, Legality legality,
                                        std::size_t max_length = 0);

}  // namespace gsql
