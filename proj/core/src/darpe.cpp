#include "gsql/darpe.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <ostream>

#include "parallel.hpp"

namespace gsql {

namespace {

// Thompson NFA with epsilon moves; only used as input to the subset construction.
struct Nfa {
  std::vector<std::vector<int>> eps;
  std::vector<std::vector<std::pair<int, int>>> moves;  // (letter, target)

  int add_state() {
    eps.emplace_back();
    moves.emplace_back();
    return static_cast<int>(eps.size()) - 1;
  }
};

struct Fragment {
  int in;
  int out;
};

class NfaBuilder {
 public:
  NfaBuilder(const Catalog& catalog, Nfa& nfa) : catalog_(catalog), nfa_(nfa) {}

  Fragment build(const Darpe& d) {
    switch (d.kind) {
      case Darpe::Kind::Symbol:
        return symbol(d);
      case Darpe::Kind::Concat: {
        Fragment f = build(*d.kids[0]);
        for (std::size_t i = 1; i < d.kids.size(); ++i) {
          Fragment g = build(*d.kids[i]);
          nfa_.eps[f.out].push_back(g.in);
          f.out = g.out;
        }
        return f;
      }
      case Darpe::Kind::Alt: {
        Fragment f{nfa_.add_state(), nfa_.add_state()};
        for (const auto& kid : d.kids) {
          Fragment g = build(*kid);
          nfa_.eps[f.in].push_back(g.in);
          nfa_.eps[g.out].push_back(f.out);
        }
        return f;
      }
      case Darpe::Kind::Star:
        return repeat(*d.kids[0], d.lo.value_or(0), d.hi);
    }
    return {};
  }

 private:
  Fragment epsilon() {
    int s = nfa_.add_state();
    return {s, s};
  }

  Fragment star(const Darpe& kid) {
    Fragment f{nfa_.add_state(), nfa_.add_state()};
    Fragment g = build(kid);
    nfa_.eps[f.in].push_back(g.in);
    nfa_.eps[f.in].push_back(f.out);
    nfa_.eps[g.out].push_back(g.in);
    nfa_.eps[g.out].push_back(f.out);
    return f;
  }

  // kid{lo,hi}: lo mandatory copies, then hi - lo optional ones (or a loop).
  Fragment repeat(const Darpe& kid, int lo, std::optional<int> hi) {
    Fragment f = epsilon();
    auto append = [&](Fragment g) {
      nfa_.eps[f.out].push_back(g.in);
      f.out = g.out;
    };
    for (int i = 0; i < lo; ++i) append(build(kid));
    if (!hi) {
      append(star(kid));
      return f;
    }
    int end = nfa_.add_state();
    for (int i = lo; i < *hi; ++i) {
      nfa_.eps[f.out].push_back(end);
      append(build(kid));
    }
    nfa_.eps[f.out].push_back(end);
    f.out = end;
    return f;
  }

  Fragment symbol(const Darpe& d) {
    std::vector<int> letters;
    if (d.edge_type == "_") {
      for (const auto& e : catalog_.edge_types()) {
        if (!e.directed) {
          if (d.dir == Adorn::None) letters.push_back(DarpeAutomaton::letter(e.id, DarpeAutomaton::kPlain));
          continue;
        }
        if (d.dir != Adorn::Backward)
          letters.push_back(DarpeAutomaton::letter(e.id, DarpeAutomaton::kForward));
        if (d.dir != Adorn::Forward)
          letters.push_back(DarpeAutomaton::letter(e.id, DarpeAutomaton::kBackward));
      }
    } else {
      const EdgeTypeDef* e = catalog_.find_edge_type(d.edge_type);
      if (!e) fail(ErrorKind::Semantic, "unknown edge type '" + d.edge_type + "'", d.pos);
      if (d.dir == Adorn::None) {
        if (e->directed)
          fail(ErrorKind::Semantic,
               "directed edge type '" + e->name + "' needs a direction: " + e->name + "> or <" +
                   e->name,
               d.pos);
        letters.push_back(DarpeAutomaton::letter(e->id, DarpeAutomaton::kPlain));
      } else {
        if (!e->directed)
          fail(ErrorKind::Semantic,
               "undirected edge type '" + e->name + "' cannot take a direction", d.pos);
        letters.push_back(DarpeAutomaton::letter(
            e->id, d.dir == Adorn::Forward ? DarpeAutomaton::kForward : DarpeAutomaton::kBackward));
      }
    }
    Fragment f{nfa_.add_state(), nfa_.add_state()};
    for (int l : letters) nfa_.moves[f.in].emplace_back(l, f.out);
    return f;
  }

  const Catalog& catalog_;
  Nfa& nfa_;
};

std::vector<int> closure(const Nfa& nfa, std::vector<int> states) {
  std::vector<char> seen(nfa.eps.size(), 0);
  std::vector<int> stack;
  for (int s : states) {
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  }
  states.clear();
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    states.push_back(s);
    for (int t : nfa.eps[s]) {
      if (!seen[t]) {
        seen[t] = 1;
        stack.push_back(t);
      }
    }
  }
  std::sort(states.begin(), states.end());
  return states;
}

// Length of every word in the language, or -1 when not fixed.
int fixed_length(const Darpe& d) {
  switch (d.kind) {
    case Darpe::Kind::Symbol:
      return 1;
    case Darpe::Kind::Concat: {
      int total = 0;
      for (const auto& kid : d.kids) {
        int n = fixed_length(*kid);
        if (n < 0) return -1;
        total += n;
      }
      return total;
    }
    case Darpe::Kind::Alt: {
      int n = fixed_length(*d.kids[0]);
      for (const auto& kid : d.kids) {
        if (fixed_length(*kid) != n) return -1;
      }
      return n;
    }
    case Darpe::Kind::Star: {
      int n = fixed_length(*d.kids[0]);
      if (n < 0 || !d.hi || d.lo.value_or(0) != *d.hi) return -1;
      return n * *d.hi;
    }
  }
  return -1;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t c = a + b;
  return c < a ? std::numeric_limits<std::uint64_t>::max() : c;
}

struct Workspace {
  std::vector<std::uint32_t> stamp;
  std::vector<std::uint32_t> dist;
  std::vector<std::uint64_t> count;
  std::vector<std::uint32_t> tstamp;
  std::vector<std::uint32_t> tdist;
  std::vector<std::uint64_t> tcount;
  std::uint32_t run = 0;
};

void match_one(const GraphView& view, const DarpeAutomaton& a, VertexId s,
               const std::function<bool(VertexId)>& target_ok, std::uint64_t cap, Workspace& ws,
               std::vector<MatchEntry>& out, std::ostream* trace) {
  const Graph& g = view.graph();
  const std::size_t q = static_cast<std::size_t>(a.num_states);
  ++ws.run;
  std::vector<std::size_t> frontier{static_cast<std::size_t>(s.value) * q + a.start};
  std::vector<std::size_t> next;
  std::vector<VertexId> hits;
  ws.stamp[frontier[0]] = ws.run;
  ws.dist[frontier[0]] = 0;
  ws.count[frontier[0]] = 1;

  for (std::uint64_t d = 0; !frontier.empty(); ++d) {
    if (trace) {
      *trace << "source " << g.pk_text(s) << " layer " << d << ":";
      for (std::size_t node : frontier) {
        *trace << " (" << g.pk_text(VertexId{static_cast<std::uint32_t>(node / q)}) << ","
               << node % q << ")x" << ws.count[node];
      }
      *trace << "\n";
    }
    for (std::size_t node : frontier) {
      int state = static_cast<int>(node % q);
      VertexId v{static_cast<std::uint32_t>(node / q)};
      if (!a.accepting[state] || (target_ok && !target_ok(v))) continue;
      if (ws.tstamp[v.value] != ws.run) {
        ws.tstamp[v.value] = ws.run;
        ws.tdist[v.value] = static_cast<std::uint32_t>(d);
        ws.tcount[v.value] = ws.count[node];
        hits.push_back(v);
      } else if (ws.tdist[v.value] == d) {
        ws.tcount[v.value] = sat_add(ws.tcount[v.value], ws.count[node]);
      }
    }
    if (d >= cap) break;
    next.clear();
    const auto nd = static_cast<std::uint32_t>(d + 1);
    for (std::size_t node : frontier) {
      int state = static_cast<int>(node % q);
      VertexId v{static_cast<std::uint32_t>(node / q)};
      std::uint64_t c = ws.count[node];
      auto relax = [&](VertexId w, int letter) {
        int to = a.step(state, letter);
        if (to < 0) return;
        std::size_t idx = static_cast<std::size_t>(w.value) * q + to;
        if (ws.stamp[idx] != ws.run) {
          ws.stamp[idx] = ws.run;
          ws.dist[idx] = nd;
          ws.count[idx] = c;
          next.push_back(idx);
        } else if (ws.dist[idx] == nd) {
          ws.count[idx] = sat_add(ws.count[idx], c);
        }
      };
      g.for_each_group(v, [&](int etype, std::span<const Incidence> outs,
                              std::span<const Incidence> ins, std::span<const Incidence> unds) {
        if (!view.has_edge_type(etype) || etype * 4 >= a.num_letters) return;
        for (const auto& inc : outs) {
          if (!view.has_vertex(inc.neighbor)) continue;
          relax(inc.neighbor, DarpeAutomaton::letter(etype, inc.neighbor == v
                                                                ? DarpeAutomaton::kLoop
                                                                : DarpeAutomaton::kForward));
        }
        for (const auto& inc : ins) {
          // Self-loops were taken from the out-list.
          if (inc.neighbor == v || !view.has_vertex(inc.neighbor)) continue;
          relax(inc.neighbor, DarpeAutomaton::letter(etype, DarpeAutomaton::kBackward));
        }
        for (const auto& inc : unds) {
          if (!view.has_vertex(inc.neighbor)) continue;
          relax(inc.neighbor, DarpeAutomaton::letter(etype, DarpeAutomaton::kPlain));
        }
      });
    }
    frontier.swap(next);
  }
  std::sort(hits.begin(), hits.end());
  for (VertexId t : hits) out.push_back(MatchEntry{s, t, ws.tcount[t.value], ws.tdist[t.value]});
}

}  // namespace

std::string symbol_text(const DirSymbol& s, const Catalog& catalog) {
  const std::string& name = catalog.edge_type(s.etype).name;
  switch (s.dir) {
    case Adorn::Forward:
      return name + ">";
    case Adorn::Backward:
      return "<" + name;
    case Adorn::None:
      break;
  }
  return name;
}

DirSymbol hop_label(const Graph& g, VertexId u, EdgeId e, VertexId v) {
  VertexId src = g.edge_source(e);
  VertexId tgt = g.edge_target(e);
  int etype = g.edge_type(e);
  if (!g.edge_directed(e)) {
    if ((src == u && tgt == v) || (src == v && tgt == u)) return DirSymbol{etype, Adorn::None};
  } else if (src == u && tgt == v) {
    return DirSymbol{etype, Adorn::Forward};
  } else if (src == v && tgt == u) {
    return DirSymbol{etype, Adorn::Backward};
  }
  fail(ErrorKind::Runtime, "edge is not incident to the hop's endpoints");
}

bool DarpeAutomaton::accepts(const std::vector<DirSymbol>& word) const {
  int state = start;
  for (const auto& sym : word) {
    int k = sym.dir == Adorn::None ? kPlain : sym.dir == Adorn::Forward ? kForward : kBackward;
    int l = letter(sym.etype, k);
    if (l >= num_letters) return false;
    state = step(state, l);
    if (state < 0) return false;
  }
  return accepting[state] != 0;
}

DarpeAutomaton compile_darpe(const Darpe& d, const Catalog& catalog) {
  Nfa nfa;
  NfaBuilder builder(catalog, nfa);
  Fragment f = builder.build(d);
  const int num_letters = static_cast<int>(catalog.edge_types().size()) * 4;

  DarpeAutomaton a;
  a.num_letters = num_letters;
  a.fixed_length = fixed_length(d);
  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> sets;
  auto intern = [&](std::vector<int> set) {
    auto [it, fresh] = index.emplace(set, static_cast<int>(sets.size()));
    if (fresh) {
      sets.push_back(std::move(set));
      a.delta.insert(a.delta.end(), num_letters, -1);
    }
    return it->second;
  };
  a.start = intern(closure(nfa, {f.in}));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    // Targets per letter, before closure. The loop letter of a directed type
    // moves like its forward and backward letters together.
    std::map<int, std::vector<int>> moves;
    for (int s : sets[i]) {
      for (auto [l, t] : nfa.moves[s]) {
        moves[l].push_back(t);
        int k = l % 4;
        if (k == DarpeAutomaton::kForward || k == DarpeAutomaton::kBackward)
          moves[l - k + DarpeAutomaton::kLoop].push_back(t);
      }
    }
    for (auto& [l, targets] : moves) {
      int to = intern(closure(nfa, std::move(targets)));
      a.delta[i * num_letters + l] = to;
    }
  }
  a.num_states = static_cast<int>(sets.size());
  a.accepting.resize(sets.size(), 0);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    a.accepting[i] = std::binary_search(sets[i].begin(), sets[i].end(), f.out) ? 1 : 0;
  }
  return a;
}

std::vector<MatchEntry> match_darpe(const GraphView& view, const DarpeAutomaton& a,
                                    std::span<const VertexId> sources,
                                    const std::function<bool(VertexId)>& target_ok,
                                    const MatchOptions& opts) {
  const Graph& g = view.graph();
  const std::size_t nv = g.num_vertices();
  const std::size_t q = static_cast<std::size_t>(a.num_states);
  // A shortest satisfying path never revisits a (vertex, state) pair.
  std::uint64_t cap = static_cast<std::uint64_t>(nv) * q;
  int threads = opts.trace ? 1 : opts.threads;
  std::size_t chunks = std::min<std::size_t>(sources.size(), threads <= 1 ? 1 : 4 * threads);
  std::vector<std::vector<MatchEntry>> parts(std::max<std::size_t>(chunks, 1));
  detail::parallel_chunks(sources.size(), threads, chunks,
                          [&](std::size_t c, std::size_t begin, std::size_t end) {
    Workspace ws;
    ws.stamp.assign(nv * q, 0);
    ws.dist.assign(nv * q, 0);
    ws.count.assign(nv * q, 0);
    ws.tstamp.assign(nv, 0);
    ws.tdist.assign(nv, 0);
    ws.tcount.assign(nv, 0);
    for (std::size_t i = begin; i < end; ++i) {
      VertexId s = sources[i];
      if (s.value >= nv || !view.has_vertex(s)) continue;
      match_one(view, a, s, target_ok, cap, ws, parts[c], opts.trace);
    }
  });
  std::vector<MatchEntry> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace gsql
