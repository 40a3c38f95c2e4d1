#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gsql/ast.hpp"
#include "gsql/catalog.hpp"
#include "gsql/graph.hpp"

namespace gsql {

// One letter of the hop alphabet: an edge type read plainly (undirected),
// forwards or backwards.
struct DirSymbol {
  int etype = -1;
  Adorn dir = Adorn::None;

  auto operator<=>(const DirSymbol&) const = default;
};

std::string symbol_text(const DirSymbol& s, const Catalog& catalog);

// Label of the hop u -e-> v. A directed self-loop reads as forward here; the
// matcher accepts either reading for such hops.
DirSymbol hop_label(const Graph& g, VertexId u, EdgeId e, VertexId v);

// Deterministic, epsilon-free automaton over hop letters. Letter numbering is
// etype * 4 + k, with k = 0 plain, 1 forward, 2 backward, and 3 for a hop over
// a directed self-loop (which carries both the forward and backward label).
struct DarpeAutomaton {
  static constexpr int kPlain = 0;
  static constexpr int kForward = 1;
  static constexpr int kBackward = 2;
  static constexpr int kLoop = 3;

  int num_states = 0;
  int num_letters = 0;
  int start = 0;
  std::vector<char> accepting;
  // num_states * num_letters, -1 for no transition.
  std::vector<int> delta;
  // Every accepted word has this length, or -1 when lengths vary.
  int fixed_length = -1;

  static int letter(int etype, int k) { return etype * 4 + k; }
  int step(int state, int letter) const { return delta[state * num_letters + letter]; }
  bool single_hop() const { return fixed_length == 1; }
  bool accepts(const std::vector<DirSymbol>& word) const;
};

// Throws ErrorKind::Semantic for unknown edge types and for adornments that
// contradict an edge type's directedness.
DarpeAutomaton compile_darpe(const Darpe& d, const Catalog& catalog);

struct MatchEntry {
  VertexId source;
  VertexId target;
  // Number of shortest satisfying source -> target paths.
  std::uint64_t multiplicity = 0;
  std::uint32_t length = 0;

  bool operator==(const MatchEntry&) const = default;
};

struct MatchOptions {
  int threads = 1;
  // When set, product-BFS layers are written here (forces one thread).
  std::ostream* trace = nullptr;
};

// Per (source, target) pair: the shortest length of a path from source to
// target whose label is in the automaton's language, and how many such paths
// exist. Entries come grouped by source in input order, targets ascending. An
// empty target_ok accepts every vertex of the view.
std::vector<MatchEntry> match_darpe(const GraphView& view, const DarpeAutomaton& a,
                                    std::span<const VertexId> sources,
                                    const std::function<bool(VertexId)>& target_ok = {},
                                    const MatchOptions& opts = {});

}  // namespace gsql
