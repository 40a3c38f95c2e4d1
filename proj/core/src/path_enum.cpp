#include "gsql/path_enum.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>

namespace gsql {

namespace {

enum HopKind { kPlain, kForward, kBackward };

struct Hop {
  int etype;
  bool directed;
  HopKind kind;
};

// Regular expression terms for Brzozowski derivatives, hash-consed by a
// canonical key so equal terms share one node.
struct Re {
  enum class K { Empty, Eps, Sym, Cat, Alt, Star, Repeat };
  K k = K::Empty;
  const Darpe* sym = nullptr;
  std::vector<const Re*> kids;
  int lo = 0;
  int hi = 0;
  bool nullable = false;
  std::string key;
};

class Terms {
 public:
  explicit Terms(const Catalog& catalog) : catalog_(catalog) {
    empty_ = intern(Re{Re::K::Empty, nullptr, {}, 0, 0, false, "0"});
    eps_ = intern(Re{Re::K::Eps, nullptr, {}, 0, 0, true, "e"});
  }

  const Re* empty() const { return empty_; }
  const Re* eps() const { return eps_; }

  const Re* from(const Darpe& d) {
    switch (d.kind) {
      case Darpe::Kind::Symbol: {
        std::string text = d.dir == Adorn::Backward ? "<" + d.edge_type
                           : d.dir == Adorn::Forward ? d.edge_type + ">"
                                                     : d.edge_type;
        return intern(Re{Re::K::Sym, &d, {}, 0, 0, false, "s:" + text});
      }
      case Darpe::Kind::Concat: {
        const Re* r = from(*d.kids.back());
        for (std::size_t i = d.kids.size() - 1; i-- > 0;) r = cat(from(*d.kids[i]), r);
        return r;
      }
      case Darpe::Kind::Alt: {
        std::vector<const Re*> parts;
        for (const auto& kid : d.kids) parts.push_back(from(*kid));
        return alt(std::move(parts));
      }
      case Darpe::Kind::Star:
        return repeat(from(*d.kids[0]), d.lo.value_or(0), d.hi ? *d.hi : -1);
    }
    return empty_;
  }

  const Re* cat(const Re* a, const Re* b) {
    if (a == empty_ || b == empty_) return empty_;
    if (a == eps_) return b;
    if (b == eps_) return a;
    if (a->k == Re::K::Cat) return cat(a->kids[0], cat(a->kids[1], b));
    return intern(Re{Re::K::Cat, nullptr, {a, b}, 0, 0, a->nullable && b->nullable,
                     "(" + a->key + "." + b->key + ")"});
  }

  const Re* alt(std::vector<const Re*> parts) {
    std::vector<const Re*> flat;
    for (const Re* p : parts) {
      if (p->k == Re::K::Alt) {
        flat.insert(flat.end(), p->kids.begin(), p->kids.end());
      } else if (p != empty_) {
        flat.push_back(p);
      }
    }
    std::sort(flat.begin(), flat.end(), [](const Re* x, const Re* y) { return x->key < y->key; });
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.empty()) return empty_;
    if (flat.size() == 1) return flat[0];
    std::string key = "[";
    bool nullable = false;
    for (const Re* p : flat) {
      key += p->key + "|";
      nullable = nullable || p->nullable;
    }
    key += "]";
    return intern(Re{Re::K::Alt, nullptr, std::move(flat), 0, 0, nullable, std::move(key)});
  }

  const Re* star(const Re* a) {
    if (a == empty_ || a == eps_) return eps_;
    if (a->k == Re::K::Star) return a;
    return intern(Re{Re::K::Star, nullptr, {a}, 0, 0, true, "(" + a->key + ")*"});
  }

  // a{lo,hi}; hi < 0 means unbounded.
  const Re* repeat(const Re* a, int lo, int hi) {
    if (hi < 0) {
      const Re* r = star(a);
      for (int i = 0; i < lo; ++i) r = cat(a, r);
      return r;
    }
    if (hi == 0) return eps_;
    if (a == empty_) return lo == 0 ? eps_ : empty_;
    if (a == eps_) return eps_;
    return intern(Re{Re::K::Repeat, nullptr, {a}, lo, hi, lo == 0 || a->nullable,
                     "(" + a->key + "){" + std::to_string(lo) + "," + std::to_string(hi) + "}"});
  }

  // Derivative by a hop that carries every label in `hops`.
  const Re* deriv(const Re* r, const std::vector<Hop>& hops) {
    auto memo_key = std::make_pair(r, hops_key(hops));
    if (auto it = memo_.find(memo_key); it != memo_.end()) return it->second;
    const Re* out = empty_;
    switch (r->k) {
      case Re::K::Empty:
      case Re::K::Eps:
        break;
      case Re::K::Sym:
        for (const Hop& h : hops) {
          if (symbol_matches(*r->sym, h)) out = eps_;
        }
        break;
      case Re::K::Cat: {
        const Re* a = r->kids[0];
        const Re* b = r->kids[1];
        out = alt({cat(deriv(a, hops), b), a->nullable ? deriv(b, hops) : empty_});
        break;
      }
      case Re::K::Alt: {
        std::vector<const Re*> parts;
        for (const Re* k : r->kids) parts.push_back(deriv(k, hops));
        out = alt(std::move(parts));
        break;
      }
      case Re::K::Star:
        out = cat(deriv(r->kids[0], hops), r);
        break;
      case Re::K::Repeat: {
        const Re* a = r->kids[0];
        const Re* rest = repeat(a, std::max(r->lo - 1, 0), r->hi - 1);
        out = alt({cat(deriv(a, hops), rest), a->nullable ? deriv(rest, hops) : empty_});
        break;
      }
    }
    memo_.emplace(memo_key, out);
    return out;
  }

 private:
  const Re* intern(Re r) {
    auto it = pool_.find(r.key);
    if (it != pool_.end()) return it->second.get();
    std::string key = r.key;
    auto node = std::make_unique<Re>(std::move(r));
    const Re* p = node.get();
    pool_.emplace(std::move(key), std::move(node));
    return p;
  }

  // A hop carries one or two labels.
  static std::uint64_t hops_key(const std::vector<Hop>& hops) {
    std::uint64_t key = 0;
    for (const Hop& h : hops) key = (key << 32) | static_cast<std::uint64_t>(h.etype * 3 + h.kind + 1);
    return key;
  }

  bool symbol_matches(const Darpe& s, const Hop& h) const {
    if (s.edge_type != "_" && s.edge_type != catalog_.edge_type(h.etype).name) return false;
    switch (s.dir) {
      case Adorn::None:
        return s.edge_type == "_" ? true : h.kind == kPlain;
      case Adorn::Forward:
        return h.directed && h.kind == kForward;
      case Adorn::Backward:
        return h.directed && h.kind == kBackward;
    }
    return false;
  }

  const Catalog& catalog_;
  std::map<std::string, std::unique_ptr<Re>> pool_;
  std::map<std::pair<const Re*, std::uint64_t>, const Re*> memo_;
  const Re* empty_;
  const Re* eps_;
};

struct Step {
  EdgeId edge;
  VertexId to;
  std::vector<Hop> hops;
};

std::vector<Step> steps_from(const GraphView& view, VertexId v) {
  const Graph& g = view.graph();
  std::vector<Step> out;
  g.for_each_group(v, [&](int etype, std::span<const Incidence> outs,
                          std::span<const Incidence> ins, std::span<const Incidence> unds) {
    if (!view.has_edge_type(etype)) return;
    for (const auto& inc : outs) {
      if (!view.has_vertex(inc.neighbor)) continue;
      if (inc.neighbor == v) {
        out.push_back({inc.edge, inc.neighbor, {{etype, true, kForward}, {etype, true, kBackward}}});
      } else {
        out.push_back({inc.edge, inc.neighbor, {{etype, true, kForward}}});
      }
    }
    for (const auto& inc : ins) {
      if (inc.neighbor == v || !view.has_vertex(inc.neighbor)) continue;
      out.push_back({inc.edge, inc.neighbor, {{etype, true, kBackward}}});
    }
    for (const auto& inc : unds) {
      if (!view.has_vertex(inc.neighbor)) continue;
      out.push_back({inc.edge, inc.neighbor, {{etype, false, kPlain}}});
    }
  });
  return out;
}

class Enumerator {
 public:
  Enumerator(const GraphView& view, const Darpe& d, VertexId s, VertexId t)
      : view_(view), terms_(view.graph().catalog()), s_(s), t_(t) {
    root_ = terms_.from(d);
  }

  std::vector<Path> all_shortest() {
    // Breadth-first distances over (vertex, derivative) states.
    std::map<std::pair<std::uint32_t, const Re*>, std::size_t> dist;
    std::deque<std::pair<VertexId, const Re*>> queue;
    dist[{s_.value, root_}] = 0;
    queue.emplace_back(s_, root_);
    std::size_t best = SIZE_MAX;
    while (!queue.empty()) {
      auto [v, r] = queue.front();
      queue.pop_front();
      std::size_t d = dist[{v.value, r}];
      if (d > best) break;
      if (v == t_ && r->nullable) best = std::min(best, d);
      for (const Step& st : steps(v)) {
        const Re* next = terms_.deriv(r, st.hops);
        if (next == terms_.empty()) continue;
        if (dist.emplace(std::make_pair(st.to.value, next), d + 1).second)
          queue.emplace_back(st.to, next);
      }
    }
    std::vector<Path> out;
    if (best == SIZE_MAX) return out;
    // A shortest satisfying path reaches every state on it at that state's
    // breadth-first distance; other branches cannot be part of one.
    Path path{{s_}, {}};
    std::function<void(VertexId, const Re*)> dfs = [&](VertexId v, const Re* r) {
      std::size_t depth = path.edges.size();
      if (depth == best) {
        if (v == t_ && r->nullable) out.push_back(path);
        return;
      }
      for (const Step& st : steps(v)) {
        const Re* next = terms_.deriv(r, st.hops);
        if (next == terms_.empty()) continue;
        auto it = dist.find({st.to.value, next});
        if (it == dist.end() || it->second != depth + 1) continue;
        path.vertices.push_back(st.to);
        path.edges.push_back(st.edge);
        dfs(st.to, next);
        path.vertices.pop_back();
        path.edges.pop_back();
      }
    };
    dfs(s_, root_);
    return out;
  }

  std::vector<Path> exhaustive(Legality legality, std::size_t max_length) {
    std::vector<Path> out;
    Path path{{s_}, {}};
    std::set<std::uint32_t> used_vertices{s_.value};
    std::set<std::uint32_t> used_edges;
    std::function<void(VertexId, const Re*)> dfs = [&](VertexId v, const Re* r) {
      if (v == t_ && r->nullable) out.push_back(path);
      if (legality == Legality::Unrestricted && path.edges.size() >= max_length) return;
      for (const Step& st : steps(v)) {
        if (legality == Legality::NoRepeatVertex && used_vertices.count(st.to.value)) continue;
        if (legality == Legality::NoRepeatEdge && used_edges.count(st.edge.value)) continue;
        const Re* next = terms_.deriv(r, st.hops);
        if (next == terms_.empty()) continue;
        used_vertices.insert(st.to.value);
        used_edges.insert(st.edge.value);
        path.vertices.push_back(st.to);
        path.edges.push_back(st.edge);
        dfs(st.to, next);
        path.vertices.pop_back();
        path.edges.pop_back();
        used_vertices.erase(st.to.value);
        used_edges.erase(st.edge.value);
      }
    };
    dfs(s_, root_);
    return out;
  }

 private:
  const std::vector<Step>& steps(VertexId v) {
    auto it = steps_.find(v.value);
    if (it == steps_.end()) it = steps_.emplace(v.value, steps_from(view_, v)).first;
    return it->second;
  }

  const GraphView& view_;
  Terms terms_;
  VertexId s_;
  VertexId t_;
  const Re* root_;
  std::map<std::uint32_t, std::vector<Step>> steps_;
};

}  // namespace

std::vector<Path> enumerate_legal_paths(const GraphView& view, const Darpe& d, VertexId s,
                                        VertexId t, Legality legality, std::size_t max_length) {
  constexpr std::size_t kMaxVertices = 20;
  if (view.vertices().size() > kMaxVertices)
    fail(ErrorKind::Runtime, "path enumeration is limited to graphs of at most 20 vertices");
  if (!view.has_vertex(s) || !view.has_vertex(t)) return {};
  Enumerator e(view, d, s, t);
  if (legality == Legality::AllShortest) return e.all_shortest();
  return e.exhaustive(legality, max_length);
}

}  // namespace gsql
