#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gsql/context.hpp"
#include "gsql/darpe.hpp"
#include "gsql/graph.hpp"

namespace gsql {

struct NodeSpec {
  // Accepted vertex types; empty accepts every type of the view.
  std::vector<int> type_ids;
  // Vertex-set test, when set.
  std::shared_ptr<const VertexSet> set;
  // Variable bound before matching (a parameter, say).
  std::optional<VertexId> fixed;
  // Binding-table column name; empty for an anonymous node.
  std::string var;
};

struct HopSpec {
  std::shared_ptr<const DarpeAutomaton> automaton;
  // Only for single-hop automata.
  std::string edge_var;
};

struct PathSpec {
  std::vector<NodeSpec> nodes;
  std::vector<HopSpec> hops;
  // Automaton of all hops concatenated. Needed when some hop has a variable
  // length, to keep only segmentations of overall shortest paths.
  std::shared_ptr<const DarpeAutomaton> concat;
};

// Matches S0:x0 -(D1)- S1:x1 ... -(Dn)- Sn:xn. Each segment is a shortest
// D_i path between its endpoints; the row multiplicity is the number of such
// segmentations, summed over anonymous intermediate vertices. Columns are the
// named variables in order of first appearance; a repeated name must bind the
// same element.
BindingTable match_path(const GraphView& view, const PathSpec& path, const MatchOptions& opts = {});

bool node_accepts(const GraphView& view, const NodeSpec& node, VertexId v);

}  // namespace gsql
