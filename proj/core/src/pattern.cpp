#include "gsql/pattern.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "parallel.hpp"

namespace gsql {

namespace {

struct State {
  // Offset of this state's row in the row buffer.
  std::size_t row;
  VertexId start;
  VertexId cur;
  std::uint64_t len;
  std::uint64_t mult;
};

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s < a ? std::numeric_limits<std::uint64_t>::max() : s;
}

std::size_t hash_value(const Value& v) {
  const auto& s = v.storage();
  switch (s.index()) {
    case 2:
      return std::hash<std::int64_t>()(v.as_int());
    case 4:
      return std::hash<std::string>()(v.as_string());
    case 6:
      return std::hash<std::uint32_t>()(v.as_vertex().value) * 31 + 6;
    case 7:
      return std::hash<std::uint32_t>()(v.as_edge().value) * 31 + 7;
    case 8:
      return std::hash<const void*>()(v.as_row().table.get()) ^ (v.as_row().row * 0x9e3779b97f4a7c15ull);
    default:
      return std::hash<std::string>()(to_debug_string(v));
  }
}

// Rows of a partially built binding table, `width` cells each.
struct Rows {
  std::size_t width = 0;
  std::vector<Value> cells;

  std::size_t push(const Value* src) {
    std::size_t at = cells.size();
    cells.insert(cells.end(), src, src + width);
    return at;
  }
};

std::vector<VertexId> candidates(const GraphView& view, const NodeSpec& node) {
  std::vector<VertexId> out;
  if (node.fixed) {
    if (node_accepts(view, node, *node.fixed)) out.push_back(*node.fixed);
    return out;
  }
  if (node.set) {
    for (VertexId v : node.set->members()) {
      if (node_accepts(view, node, v)) out.push_back(v);
    }
    return out;
  }
  if (node.type_ids.empty()) return view.vertices();
  for (int t : node.type_ids) {
    if (!view.has_vertex_type(t)) continue;
    const auto& vs = view.graph().vertices_of_type(t);
    out.insert(out.end(), vs.begin(), vs.end());
  }
  return out;
}

}  // namespace

bool node_accepts(const GraphView& view, const NodeSpec& node, VertexId v) {
  if (!view.has_vertex(v)) return false;
  if (node.fixed && *node.fixed != v) return false;
  if (!node.type_ids.empty() &&
      std::find(node.type_ids.begin(), node.type_ids.end(), view.graph().vertex_type(v)) ==
          node.type_ids.end())
    return false;
  if (node.set && !node.set->contains(v)) return false;
  return true;
}

BindingTable match_path(const GraphView& view, const PathSpec& path, const MatchOptions& opts) {
  const Graph& g = view.graph();
  // Column layout: node and edge variables in order of first appearance.
  std::vector<std::string> vars;
  auto column = [&](const std::string& name) -> int {
    if (name.empty()) return -1;
    auto it = std::find(vars.begin(), vars.end(), name);
    if (it != vars.end()) return static_cast<int>(it - vars.begin());
    vars.push_back(name);
    return static_cast<int>(vars.size()) - 1;
  };
  std::vector<int> node_col(path.nodes.size(), -1);
  std::vector<int> edge_col(path.hops.size(), -1);
  // Whether a node column was already bound when that node is reached.
  std::vector<bool> node_repeat(path.nodes.size(), false);
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    std::size_t before = vars.size();
    node_col[i] = column(path.nodes[i].var);
    node_repeat[i] = node_col[i] >= 0 && vars.size() == before;
    if (i < path.hops.size()) edge_col[i] = column(path.hops[i].edge_var);
  }

  Rows rows;
  rows.width = vars.size();
  std::vector<State> states;
  {
    std::vector<Value> blank(rows.width);
    for (VertexId v : candidates(view, path.nodes[0])) {
      if (node_col[0] >= 0) blank[node_col[0]] = Value(v);
      states.push_back(State{rows.push(blank.data()), v, v, 0, 1});
    }
  }

  for (std::size_t h = 0; h < path.hops.size() && !states.empty(); ++h) {
    const DarpeAutomaton& a = *path.hops[h].automaton;
    const NodeSpec& next = path.nodes[h + 1];
    const int ncol = node_col[h + 1];
    const bool repeat = node_repeat[h + 1];
    const int ecol = edge_col[h];

    auto extend = [&](Rows& out_rows, std::vector<State>& out, const State& s, VertexId target,
                      const EdgeId* edge, std::uint64_t len, std::uint64_t mult) {
      const Value* src = rows.cells.data() + s.row;
      if (repeat && !(src[ncol] == Value(target))) return;
      std::size_t at = out_rows.push(src);
      if (ncol >= 0) out_rows.cells[at + ncol] = Value(target);
      if (edge && ecol >= 0) out_rows.cells[at + ecol] = Value(*edge);
      out.push_back(State{at, s.start, target, s.len + len, sat_mul(s.mult, mult)});
    };

    Rows next_rows;
    next_rows.width = rows.width;
    std::vector<State> next_states;

    if (a.single_hop()) {
      std::size_t n = states.size();
      std::size_t chunks = detail::default_chunks(n);
      std::vector<Rows> part_rows(chunks, Rows{rows.width, {}});
      std::vector<std::vector<State>> part_states(chunks);
      detail::parallel_chunks(n, opts.threads, chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          const State& s = states[i];
          g.for_each_group(s.cur, [&](int etype, std::span<const Incidence> outs,
                                      std::span<const Incidence> ins, std::span<const Incidence> unds) {
            if (!view.has_edge_type(etype)) return;
            auto try_letter = [&](const Incidence& inc, int k) {
              int q = a.step(a.start, DarpeAutomaton::letter(etype, k));
              if (q < 0 || !a.accepting[q]) return;
              if (!node_accepts(view, next, inc.neighbor)) return;
              extend(part_rows[c], part_states[c], s, inc.neighbor, &inc.edge, 1, 1);
            };
            for (const auto& inc : outs) {
              try_letter(inc, inc.neighbor == s.cur ? DarpeAutomaton::kLoop : DarpeAutomaton::kForward);
            }
            for (const auto& inc : ins) {
              if (inc.neighbor != s.cur) try_letter(inc, DarpeAutomaton::kBackward);
            }
            for (const auto& inc : unds) try_letter(inc, DarpeAutomaton::kPlain);
          });
        }
      });
      for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t base = next_rows.cells.size();
        next_rows.cells.insert(next_rows.cells.end(), std::make_move_iterator(part_rows[c].cells.begin()),
                               std::make_move_iterator(part_rows[c].cells.end()));
        for (State s : part_states[c]) {
          s.row += base;
          next_states.push_back(s);
        }
      }
    } else {
      std::vector<VertexId> sources;
      std::unordered_map<std::uint32_t, std::size_t> seen;
      for (const State& s : states) {
        if (seen.emplace(s.cur.value, sources.size()).second) sources.push_back(s.cur);
      }
      auto accept = [&](VertexId v) { return node_accepts(view, next, v); };
      MatchOptions mo = opts;
      std::vector<MatchEntry> entries = match_darpe(view, a, sources, accept, mo);
      // Entries come grouped by source in input order.
      std::vector<std::pair<std::size_t, std::size_t>> range(sources.size(), {0, 0});
      std::size_t at = 0;
      for (std::size_t si = 0; si < sources.size(); ++si) {
        std::size_t begin = at;
        while (at < entries.size() && entries[at].source == sources[si]) ++at;
        range[si] = {begin, at};
      }
      for (const State& s : states) {
        auto [begin, end] = range[seen[s.cur.value]];
        for (std::size_t k = begin; k < end; ++k) {
          const MatchEntry& m = entries[k];
          extend(next_rows, next_states, s, m.target, nullptr, m.length, m.multiplicity);
        }
      }
    }
    rows = std::move(next_rows);
    states = std::move(next_states);
  }

  if (path.concat && path.hops.size() > 1 && !states.empty()) {
    std::vector<VertexId> starts;
    std::unordered_map<std::uint32_t, std::size_t> seen;
    for (const State& s : states) {
      if (seen.emplace(s.start.value, starts.size()).second) starts.push_back(s.start);
    }
    const NodeSpec& last = path.nodes.back();
    auto accept = [&](VertexId v) { return node_accepts(view, last, v); };
    std::vector<MatchEntry> entries = match_darpe(view, *path.concat, starts, accept, opts);
    std::unordered_map<std::uint64_t, std::uint32_t> shortest;
    for (const auto& m : entries) {
      shortest[(std::uint64_t{m.source.value} << 32) | m.target.value] = m.length;
    }
    std::vector<State> kept;
    for (const State& s : states) {
      auto it = shortest.find((std::uint64_t{s.start.value} << 32) | s.cur.value);
      if (it != shortest.end() && it->second == s.len) kept.push_back(s);
    }
    states = std::move(kept);
  }

  // Merge states that bind the same row.
  struct Key {
    const Value* row;
    std::size_t width;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = 0;
      for (std::size_t i = 0; i < k.width; ++i) h = h * 1000003u ^ hash_value(k.row[i]);
      return h;
    }
  };
  struct KeyEq {
    bool operator()(const Key& a, const Key& b) const {
      for (std::size_t i = 0; i < a.width; ++i) {
        if (compare(a.row[i], b.row[i]) != 0) return false;
      }
      return true;
    }
  };
  std::unordered_map<Key, std::size_t, KeyHash, KeyEq> index;
  index.reserve(states.size());
  std::vector<std::size_t> order;
  std::vector<std::uint64_t> mult;
  for (const State& s : states) {
    Key k{rows.cells.data() + s.row, rows.width};
    auto [it, fresh] = index.emplace(k, order.size());
    if (fresh) {
      order.push_back(s.row);
      mult.push_back(s.mult);
    } else {
      mult[it->second] = sat_add(mult[it->second], s.mult);
    }
  }
  BindingTable out(vars);
  out.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.add(std::span<const Value>(rows.cells.data() + order[i], rows.width), mult[i]);
  }
  return out;
}

}  // namespace gsql
