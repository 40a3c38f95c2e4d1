#include "gsql/evaluator.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <cmath>
#include <limits>
#include <set>
#include <span>
#include <unordered_map>
#include <unordered_set>

#include "gsql/pattern.hpp"
#include "parallel.hpp"

namespace gsql {

namespace {

constexpr std::uint32_t kGlobal = std::numeric_limits<std::uint32_t>::max();
constexpr std::size_t kNoRow = std::numeric_limits<std::size_t>::max();

[[noreturn]] void runtime_error(const std::string& message, SourcePos pos = {}) {
  fail(ErrorKind::Runtime, message, pos);
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Three-valued truth: nullopt for NULL.
std::optional<bool> truth(const Value& v, SourcePos pos) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_bool()) runtime_error("expected a boolean, got " + to_debug_string(v), pos);
  return v.as_bool();
}

bool holds(const Value& v, SourcePos pos) { return truth(v, pos).value_or(false); }

Value default_base(const ElemType& t) {
  switch (t.kind) {
    case ScalarKind::Int:
    case ScalarKind::UInt:
      return Value(std::int64_t{0});
    case ScalarKind::Float:
    case ScalarKind::Double:
      return Value(0.0);
    case ScalarKind::String:
      return Value(std::string());
    case ScalarKind::Bool:
      return Value(false);
    case ScalarKind::Datetime:
      return Value(Datetime{0});
    default:
      return Value();
  }
}

std::int64_t as_count(const Value& v, const char* what, SourcePos pos) {
  if (!v.is_int()) runtime_error(std::string(what) + " must be an integer", pos);
  return v.as_int();
}

Value arith(Op op, const Value& a, const Value& b, SourcePos pos) {
  if (a.is_null() || b.is_null()) return Value();
  if (op == Op::Add && a.is_string() && b.is_string()) return Value(a.as_string() + b.as_string());
  if (!a.is_numeric() || !b.is_numeric())
    runtime_error("type mismatch: " + to_debug_string(a) + " " + std::string(op_text(op)) + " " +
                      to_debug_string(b),
                  pos);
  if (a.is_int() && b.is_int()) {
    std::int64_t x = a.as_int(), y = b.as_int();
    switch (op) {
      case Op::Add:
        return Value(x + y);
      case Op::Sub:
        return Value(x - y);
      case Op::Mul:
        return Value(x * y);
      case Op::Div:
        if (y == 0) runtime_error("division by zero", pos);
        return Value(x / y);
      case Op::Mod:
        if (y == 0) runtime_error("division by zero", pos);
        return Value(x % y);
      case Op::BitAnd:
        return Value(x & y);
      case Op::BitOr:
        return Value(x | y);
      default:
        break;
    }
  }
  double x = a.as_number(), y = b.as_number();
  switch (op) {
    case Op::Add:
      return Value(x + y);
    case Op::Sub:
      return Value(x - y);
    case Op::Mul:
      return Value(x * y);
    case Op::Div:
      if (y == 0.0) runtime_error("division by zero", pos);
      return Value(x / y);
    case Op::Mod:
      if (y == 0.0) runtime_error("division by zero", pos);
      return Value(std::fmod(x, y));
    default:
      runtime_error("operator " + std::string(op_text(op)) + " needs integers", pos);
  }
}

// Comparison with the datetime-versus-year rule; nullopt when either is NULL.
std::optional<int> compare_values(const Value& a, const Value& b) {
  if (a.is_null() || b.is_null()) return std::nullopt;
  if (a.is_datetime() && b.is_int())
    return compare(Value(std::int64_t{datetime_year(a.as_datetime())}), b);
  if (a.is_int() && b.is_datetime())
    return compare(a, Value(std::int64_t{datetime_year(b.as_datetime())}));
  return compare(a, b);
}

std::vector<Value> items_of(const Value& v, SourcePos pos) {
  if (v.is_vertex_set()) {
    std::vector<Value> out;
    for (VertexId x : v.as_vertex_set().members()) out.emplace_back(x);
    return out;
  }
  if (v.is_collection()) return v.as_collection().items;
  if (v.is_map()) {
    std::vector<Value> out;
    for (const auto& [k, val] : v.as_map().entries) out.push_back(k);
    return out;
  }
  runtime_error("expected a collection, got " + to_debug_string(v), pos);
}

bool contains_value(const Value& container, const Value& x, SourcePos pos) {
  if (container.is_string()) {
    if (!x.is_string()) runtime_error("CONTAINS on a string needs a string", pos);
    return container.as_string().find(x.as_string()) != std::string::npos;
  }
  if (container.is_vertex_set()) return x.is_vertex() && container.as_vertex_set().contains(x.as_vertex());
  if (container.is_map()) {
    const auto& e = container.as_map().entries;
    auto it = std::lower_bound(e.begin(), e.end(), x,
                               [](const auto& p, const Value& k) { return compare(p.first, k) < 0; });
    return it != e.end() && it->first == x;
  }
  if (container.is_collection()) {
    const auto& c = container.as_collection();
    if (c.kind == CollectionKind::Set || c.kind == CollectionKind::Bag)
      return std::binary_search(c.items.begin(), c.items.end(), x, ValueLess());
    return std::find(c.items.begin(), c.items.end(), x) != c.items.end();
  }
  runtime_error("expected a collection, got " + to_debug_string(container), pos);
}

Value set_op(Op op, const Value& a, const Value& b, SourcePos pos) {
  if (a.is_vertex_set() && b.is_vertex_set()) {
    const VertexSet& x = a.as_vertex_set();
    const VertexSet& y = b.as_vertex_set();
    std::vector<VertexId> out;
    if (op == Op::Union) {
      out = x.members();
      for (VertexId v : y.members()) {
        if (!x.contains(v)) out.push_back(v);
      }
    } else {
      bool want = op == Op::Intersect;
      for (VertexId v : x.members()) {
        if (y.contains(v) == want) out.push_back(v);
      }
    }
    return Value(VertexSet::from_unique(std::move(out)));
  }
  std::vector<Value> xs = items_of(a, pos);
  std::vector<Value> ys = items_of(b, pos);
  std::vector<Value> out;
  if (op == Op::Union) {
    out = xs;
    out.insert(out.end(), ys.begin(), ys.end());
  } else {
    std::vector<Value> sorted = ys;
    std::sort(sorted.begin(), sorted.end(), ValueLess());
    bool want = op == Op::Intersect;
    for (const auto& v : xs) {
      if (std::binary_search(sorted.begin(), sorted.end(), v, ValueLess()) == want) out.push_back(v);
    }
  }
  if (a.is_vertex_set()) {
    std::vector<VertexId> vs;
    for (const auto& v : out) {
      if (!v.is_vertex()) runtime_error("vertex set operation with non-vertex elements", pos);
      vs.push_back(v.as_vertex());
    }
    return Value(VertexSet::from_any(vs));
  }
  CollectionKind kind = a.is_collection() ? a.as_collection().kind : CollectionKind::Set;
  if (op == Op::Union && kind == CollectionKind::Set) {
    return make_collection(CollectionKind::Set, std::move(out));
  }
  return make_collection(kind == CollectionKind::Tuple ? CollectionKind::List : kind, std::move(out));
}

bool order_sensitive(const AccSpec& spec) {
  return spec.kind == AccKind::List ||
         (spec.kind == AccKind::Sum && spec.elem.kind == ScalarKind::String);
}

void apply_input(const AccSpec& spec, AccumValue& acc, bool set, const Value& v, std::uint64_t mult) {
  if (set) {
    acc = assign_value(spec, acc, v);
    return;
  }
  if (mult == 1) {
    combine_into(spec, acc, v);
    return;
  }
  switch (spec.kind) {
    case AccKind::Min:
    case AccKind::Max:
    case AccKind::Or:
    case AccKind::And:
    case AccKind::Set:
    case AccKind::BitwiseOr:
    case AccKind::BitwiseAnd:
      combine_into(spec, acc, v);
      return;
    case AccKind::Sum:
      if (mult > 64 && v.is_int()) {
        combine_into(spec, acc, Value(v.as_int() * static_cast<std::int64_t>(mult)));
        return;
      }
      if (mult > 64 && v.is_double()) {
        combine_into(spec, acc, Value(v.as_double() * static_cast<double>(mult)));
        return;
      }
      break;
    case AccKind::Avg:
      if (mult > 64 && v.is_numeric()) {
        acc.avg.sum += v.as_number() * static_cast<double>(mult);
        acc.avg.count += static_cast<std::int64_t>(mult);
        return;
      }
      break;
    default:
      break;
  }
  for (std::uint64_t i = 0; i < mult; ++i) combine_into(spec, acc, v);
}

struct SlotState {
  Value value;
  AccumValue acc;
  AccumValue acc_prime;
  std::shared_ptr<std::vector<AccumValue>> vacc;
  std::shared_ptr<std::vector<AccumValue>> vacc_prime;
};

struct AccInput {
  int slot;
  std::uint32_t vertex;
  bool set;
  Value value;
  std::uint64_t mult;
  std::size_t exec;
};

// Pending direct writes of one acc-execution, visible to its own later reads.
struct OverlayEntry {
  int slot;
  std::uint32_t vertex;
  AccumValue acc;
};

struct Scope {
  std::span<const Value> row;
  std::vector<Value>* locals = nullptr;
  std::vector<OverlayEntry>* overlay = nullptr;
  // Grouped output: the binding table and the rows of the current group.
  const BindingTable* table = nullptr;
  const std::vector<std::size_t>* members = nullptr;
  // Output column values, for HAVING and ORDER BY.
  std::span<const Value> aliases;
};

enum class Flow { Normal, Break, Continue };

struct OutRow {
  std::vector<Value> values;
  std::size_t rep = kNoRow;
  std::vector<std::size_t> members;
};

struct RowsHash {
  std::size_t operator()(const std::vector<Value>& r) const {
    std::size_t h = r.size();
    for (const auto& v : r) {
      std::size_t x;
      if (v.is_vertex()) {
        x = v.as_vertex().value * 0x9e3779b9u;
      } else if (v.is_int()) {
        x = std::hash<std::int64_t>()(v.as_int());
      } else if (v.is_string()) {
        x = std::hash<std::string>()(v.as_string());
      } else {
        x = std::hash<std::string>()(to_debug_string(v));
      }
      h = h * 1000003u ^ x;
    }
    return h;
  }
};

struct RowsEq {
  bool operator()(const std::vector<Value>& a, const std::vector<Value>& b) const {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (compare(a[i], b[i]) != 0) return false;
    }
    return true;
  }
};

class Evaluator {
 public:
  Evaluator(const Graph* g, const Context& ctx0, const QueryPlan* plan, const EvalOptions& opts)
      : g_(g), ctx0_(ctx0), plan_(plan), opts_(opts) {
    if (plan_) frame_.resize(plan_->slots.size());
  }

  QueryResult run(const Query& q, const std::vector<Value>& args) {
    if (args.size() != q.params.size())
      runtime_error("query '" + q.name + "' expects " + std::to_string(q.params.size()) +
                        " arguments, got " + std::to_string(args.size()),
                    q.pos);
    if (!plan_->graph.empty() && !g_->catalog().find_graph(plan_->graph))
      runtime_error("unknown graph '" + plan_->graph + "'", q.pos);
    for (std::size_t i = 0; i < args.size(); ++i) {
      frame_[plan_->param_slots[i]].value = coerce_param(q.params[i], args[i]);
    }
    bare_ = q.form != QueryForm::Create;
    exec_stmts(q.body);
    QueryResult out;
    if (q.ret) out.ret = eval(*q.ret, Scope{});
    out.tables = std::move(tables_);
    out.warnings = std::move(warnings_);
    out.context = export_context();
    return out;
  }

  Value eval(const Expr& e, const Scope& sc) const;

 private:
  // ---- parameters ----
  Value coerce_param(const Param& p, const Value& v) const {
    const TypeAst& t = p.type;
    if (v.is_null()) return v;
    if (t.cat == TypeAst::Cat::Base) {
      Value out;
      try {
        out = coerce_elem(t.base, v);
      } catch (const Error& e) {
        runtime_error("argument '" + p.name + "': " + e.message(), p.pos);
      }
      if (out.is_vertex() && !t.base.type_name.empty() &&
          g_->vertex_type_name(out.as_vertex()) != t.base.type_name)
        runtime_error("argument '" + p.name + "' must be a " + t.base.type_name + " vertex", p.pos);
      return out;
    }
    if (t.cat == TypeAst::Cat::Set || t.cat == TypeAst::Cat::Bag) {
      std::vector<Value> items;
      for (const auto& x : items_of(v, p.pos)) items.push_back(coerce_elem(t.params[0].base, x));
      return make_collection(t.cat == TypeAst::Cat::Set ? CollectionKind::Set : CollectionKind::Bag,
                             std::move(items));
    }
    return v;
  }

  // ---- graph views ----
  const GraphView& view(const std::string& name) {
    auto it = views_.find(name);
    if (it != views_.end()) return *it->second;
    std::unique_ptr<GraphView> v;
    if (name.empty()) {
      v = std::make_unique<GraphView>(*g_);
    } else {
      const GraphDef* def = g_->catalog().find_graph(name);
      if (!def) runtime_error("unknown graph '" + name + "'");
      v = std::make_unique<GraphView>(*g_, *def);
    }
    return *views_.emplace(name, std::move(v)).first->second;
  }

  // ---- statements ----
  Flow exec_stmts(const std::vector<StmtPtr>& stmts) {
    for (const auto& s : stmts) {
      Flow f = exec(*s);
      if (f != Flow::Normal) return f;
    }
    return Flow::Normal;
  }

  Flow exec(const Stmt& s) {
    Scope top;
    switch (s.kind) {
      case StmtKind::Decl:
        declare(s);
        return Flow::Normal;
      case StmtKind::Assign:
        frame_[s.target_ref.index].value = eval(*s.value, top);
        return Flow::Normal;
      case StmtKind::AccUpdate: {
        const Expr& t = *s.target_expr;
        Value v = eval(*s.value, top);
        const AccSpec& spec = *plan_->slots[t.slot].spec;
        SlotState& st = frame_[t.slot];
        if (t.kind == ExprKind::GlobalAcc) {
          apply_input(spec, st.acc, !s.plus, v, 1);
        } else {
          VertexId x = vertex_of(eval(*t.args[0], top), t.pos);
          apply_input(spec, mutable_vacc(t.slot)[x.value], !s.plus, v, 1);
        }
        return Flow::Normal;
      }
      case StmtKind::Block:
        run_block(*s.block);
        return Flow::Normal;
      case StmtKind::If:
        return exec_stmts(holds(eval(*s.cond, top), s.cond->pos) ? s.body : s.else_body);
      case StmtKind::While: {
        std::int64_t limit = std::numeric_limits<std::int64_t>::max();
        if (s.limit) limit = as_count(eval(*s.limit, top), "WHILE LIMIT", s.limit->pos);
        for (std::int64_t n = 0; n < limit && holds(eval(*s.cond, top), s.cond->pos); ++n) {
          if (exec_stmts(s.body) == Flow::Break) break;
        }
        return Flow::Normal;
      }
      case StmtKind::Foreach: {
        auto bind = [&](std::size_t i, const Value& v) { frame_[s.var_refs[i].index].value = v; };
        foreach_items(s, top, [&](const std::vector<Value>& vals) {
          for (std::size_t i = 0; i < vals.size(); ++i) bind(i, vals[i]);
          return exec_stmts(s.body);
        });
        return Flow::Normal;
      }
      case StmtKind::Case: {
        const std::vector<StmtPtr>* body = pick_case(s, top);
        return body ? exec_stmts(*body) : Flow::Normal;
      }
      case StmtKind::Break:
        return Flow::Break;
      case StmtKind::Continue:
        return Flow::Continue;
    }
    return Flow::Normal;
  }

  const std::vector<StmtPtr>* pick_case(const Stmt& s, const Scope& sc) const {
    Value subject;
    if (s.subject) subject = eval(*s.subject, sc);
    for (const auto& [cond, body] : s.branches) {
      Value c = eval(*cond, sc);
      bool hit = s.subject ? compare_values(subject, c) == 0 : holds(c, cond->pos);
      if (hit) return &body;
    }
    return s.has_else || !s.else_body.empty() ? &s.else_body : nullptr;
  }

  // Calls body(values) per iteration; stops on Break.
  template <typename F>
  void foreach_items(const Stmt& s, const Scope& sc, F&& body) const {
    const std::size_t nvars = s.vars.size();
    auto step = [&](std::vector<Value> vals) { return body(vals) == Flow::Break; };
    if (s.range) {
      std::int64_t lo = as_count(eval(*s.lo, sc), "RANGE bound", s.lo->pos);
      std::int64_t hi = as_count(eval(*s.hi, sc), "RANGE bound", s.hi->pos);
      for (std::int64_t i = lo; i <= hi; ++i) {
        if (step({Value(i)})) return;
      }
      return;
    }
    Value subject = eval(*s.subject, sc);
    if (subject.is_map()) {
      for (const auto& [k, v] : subject.as_map().entries) {
        bool stop = nvars == 2 ? step({k, v}) : step({make_collection(CollectionKind::MapEntry, {k, v})});
        if (stop) return;
      }
      return;
    }
    for (const auto& item : items_of(subject, s.subject->pos)) {
      if (nvars == 2) {
        if (!item.is_collection() || item.as_collection().items.size() != 2)
          runtime_error("FOREACH with two variables needs pairs", s.pos);
        if (step({item.as_collection().items[0], item.as_collection().items[1]})) return;
      } else if (step({item})) {
        return;
      }
    }
  }

  void declare(const Stmt& s) {
    const TypeAst& type = *s.type;
    Scope top;
    if (type.cat == TypeAst::Cat::Acc) {
      std::int64_t cap = 0;
      if (type.capacity) cap = as_count(eval(*type.capacity, top), "heap capacity", type.capacity->pos);
      for (const auto& item : s.items) {
        const SlotInfo& info = plan_->slots[item.slot];
        AccumValue v = default_value(*info.spec, cap);
        if (item.init) v = assign_value(*info.spec, v, eval(*item.init, top));
        SlotState& st = frame_[item.slot];
        if (info.kind == SlotKind::GlobalAcc) {
          st.acc = v;
          st.acc_prime = v;
        } else {
          st.vacc = std::make_shared<std::vector<AccumValue>>(g_->num_vertices(), v);
          st.vacc_prime = st.vacc;
        }
      }
      return;
    }
    for (const auto& item : s.items) {
      frame_[item.slot].value =
          item.init ? coerce_elem(type.base, eval(*item.init, top)) : default_base(type.base);
    }
  }

  std::vector<AccumValue>& mutable_vacc(int slot) {
    SlotState& st = frame_[slot];
    if (!st.vacc) runtime_error("accumulator '" + plan_->slots[slot].name + "' is not declared");
    if (st.vacc.use_count() > 1) st.vacc = std::make_shared<std::vector<AccumValue>>(*st.vacc);
    return *st.vacc;
  }

  VertexId vertex_of(const Value& v, SourcePos pos) const {
    if (!v.is_vertex()) runtime_error("expected a vertex, got " + to_debug_string(v), pos);
    return v.as_vertex();
  }

  // ---- acc-executions (phase 1) ----
  const AccumValue* current_acc(int slot, std::uint32_t vertex, const Scope& sc) const {
    if (sc.overlay) {
      for (const auto& o : *sc.overlay) {
        if (o.slot == slot && o.vertex == vertex) return &o.acc;
      }
    }
    const SlotState& st = frame_[slot];
    if (vertex == kGlobal) return &st.acc;
    if (!st.vacc) runtime_error("accumulator '" + plan_->slots[slot].name + "' is not declared");
    return &(*st.vacc)[vertex];
  }

  struct AccRun {
    Scope scope;
    std::vector<AccInput>* out;
    std::uint64_t mult;
    std::size_t exec;
  };

  Flow exec_acc_stmts(const std::vector<StmtPtr>& stmts, AccRun& r) const {
    for (const auto& s : stmts) {
      Flow f = exec_acc(*s, r);
      if (f != Flow::Normal) return f;
    }
    return Flow::Normal;
  }

  Flow exec_acc(const Stmt& s, AccRun& r) const {
    const Scope& sc = r.scope;
    std::vector<Value>& locals = *sc.locals;
    switch (s.kind) {
      case StmtKind::Decl: {
        const TypeAst& type = *s.type;
        if (type.cat == TypeAst::Cat::Acc)
          runtime_error("accumulators cannot be declared inside a query block", s.pos);
        for (const auto& item : s.items) {
          locals[item.slot] =
              item.init ? coerce_elem(type.base, eval(*item.init, sc)) : default_base(type.base);
        }
        return Flow::Normal;
      }
      case StmtKind::Assign:
        locals[s.target_ref.index] = eval(*s.value, sc);
        return Flow::Normal;
      case StmtKind::AccUpdate: {
        const Expr& t = *s.target_expr;
        std::uint32_t vertex = kGlobal;
        if (t.kind == ExprKind::VertexAcc) vertex = vertex_of(eval(*t.args[0], sc), t.pos).value;
        Value v = eval(*s.value, sc);
        const AccSpec& spec = *plan_->slots[t.slot].spec;
        // Keep this execution's own direct writes visible to its later reads.
        OverlayEntry* entry = nullptr;
        for (auto& o : *sc.overlay) {
          if (o.slot == t.slot && o.vertex == vertex) entry = &o;
        }
        if (!s.plus && !entry) {
          sc.overlay->push_back(OverlayEntry{t.slot, vertex, *current_acc(t.slot, vertex, sc)});
          entry = &sc.overlay->back();
        }
        if (entry) apply_input(spec, entry->acc, !s.plus, v, 1);
        r.out->push_back(AccInput{t.slot, vertex, !s.plus, std::move(v), r.mult, r.exec});
        return Flow::Normal;
      }
      case StmtKind::Block:
        runtime_error("nested query blocks are not supported", s.pos);
      case StmtKind::If:
        return exec_acc_stmts(holds(eval(*s.cond, sc), s.cond->pos) ? s.body : s.else_body, r);
      case StmtKind::While: {
        std::int64_t limit = std::numeric_limits<std::int64_t>::max();
        if (s.limit) limit = as_count(eval(*s.limit, sc), "WHILE LIMIT", s.limit->pos);
        for (std::int64_t n = 0; n < limit && holds(eval(*s.cond, sc), s.cond->pos); ++n) {
          if (exec_acc_stmts(s.body, r) == Flow::Break) break;
        }
        return Flow::Normal;
      }
      case StmtKind::Foreach:
        foreach_items(s, sc, [&](const std::vector<Value>& vals) {
          for (std::size_t i = 0; i < vals.size(); ++i) locals[s.var_refs[i].index] = vals[i];
          return exec_acc_stmts(s.body, r);
        });
        return Flow::Normal;
      case StmtKind::Case: {
        const std::vector<StmtPtr>* body = pick_case(s, sc);
        return body ? exec_acc_stmts(*body, r) : Flow::Normal;
      }
      case StmtKind::Break:
        return Flow::Break;
      case StmtKind::Continue:
        return Flow::Continue;
    }
    return Flow::Normal;
  }

  // Runs the statements once per row (rows[i] binds a full block-variable row)
  // and returns the inputs in row order.
  std::vector<AccInput> generate_inputs(const std::vector<StmtPtr>& stmts, int nlocals,
                                        std::size_t n,
                                        const std::function<std::span<const Value>(std::size_t)>& row,
                                        const std::function<std::uint64_t(std::size_t)>& mult) const {
    std::size_t chunks = detail::default_chunks(n);
    std::vector<std::vector<AccInput>> parts(chunks);
    detail::parallel_chunks(n, opts_.threads, chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
      std::vector<Value> locals(static_cast<std::size_t>(nlocals));
      std::vector<OverlayEntry> overlay;
      for (std::size_t i = begin; i < end; ++i) {
        std::fill(locals.begin(), locals.end(), Value());
        overlay.clear();
        AccRun r{Scope{}, &parts[c], mult(i), i};
        r.scope.row = row(i);
        r.scope.locals = &locals;
        r.scope.overlay = &overlay;
        exec_acc_stmts(stmts, r);
      }
    });
    std::vector<AccInput> all;
    for (auto& p : parts) {
      all.insert(all.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    }
    return all;
  }

  // ---- aggregation (phase 2) ----
  void refresh_primes() {
    for (std::size_t i = 0; i < frame_.size(); ++i) {
      SlotKind k = plan_->slots[i].kind;
      if (k == SlotKind::GlobalAcc) frame_[i].acc_prime = frame_[i].acc;
      if (k == SlotKind::VertexAcc) frame_[i].vacc_prime = frame_[i].vacc;
    }
  }

  void aggregate(const std::vector<AccInput>& inputs) {
    std::set<int> race_warned, order_warned;
    std::unordered_map<std::uint64_t, std::size_t> set_exec, any_exec;
    std::vector<std::uint32_t> deferred;
    auto key_of = [](const AccInput& in) { return (std::uint64_t(in.slot) << 32) | in.vertex; };
    for (std::size_t n = 0; n < inputs.size(); ++n) {
      const AccInput& in = inputs[n];
      const SlotInfo& info = plan_->slots[in.slot];
      const AccSpec& spec = *info.spec;
      std::uint64_t key = key_of(in);
      if (in.set) {
        auto [it, fresh] = set_exec.emplace(key, in.exec);
        if (!fresh && it->second != in.exec && race_warned.insert(in.slot).second)
          warnings_.push_back(info.name + " is directly assigned by several bindings; the result "
                                          "depends on binding order");
      }
      if (opts_.threads > 1 && order_sensitive(spec)) {
        auto [it, fresh] = any_exec.emplace(key, in.exec);
        if (!fresh && it->second != in.exec && order_warned.insert(in.slot).second)
          warnings_.push_back(info.name + " is order-sensitive and received inputs from several "
                                          "bindings in parallel mode");
      }
      if (needs_sorted_fold(spec)) {
        deferred.push_back(static_cast<std::uint32_t>(n));
        continue;
      }
      apply_input(spec, target(in), in.set, in.value, in.mult);
    }
    // Instances independent of input order get their inputs sorted by value;
    // with a direct assignment among them, binding order is kept.
    std::stable_sort(deferred.begin(), deferred.end(), [&](std::uint32_t a, std::uint32_t b) {
      return key_of(inputs[a]) < key_of(inputs[b]);
    });
    for (std::size_t lo = 0; lo < deferred.size();) {
      std::size_t hi = lo + 1;
      std::uint64_t key = key_of(inputs[deferred[lo]]);
      bool has_set = inputs[deferred[lo]].set;
      for (; hi < deferred.size() && key_of(inputs[deferred[hi]]) == key; ++hi) {
        has_set |= inputs[deferred[hi]].set;
      }
      if (!has_set && hi - lo > 1) {
        std::sort(deferred.begin() + lo, deferred.begin() + hi, [&](std::uint32_t a, std::uint32_t b) {
          int c = compare(inputs[a].value, inputs[b].value);
          return c != 0 ? c < 0 : inputs[a].mult < inputs[b].mult;
        });
      }
      const AccInput& first = inputs[deferred[lo]];
      const AccSpec& spec = *plan_->slots[first.slot].spec;
      AccumValue& acc = target(first);
      for (std::size_t i = lo; i < hi; ++i) {
        const AccInput& in = inputs[deferred[i]];
        apply_input(spec, acc, in.set, in.value, in.mult);
      }
      lo = hi;
    }
  }

  AccumValue& target(const AccInput& in) {
    if (in.vertex == kGlobal) return frame_[in.slot].acc;
    return mutable_vacc(in.slot)[in.vertex];
  }

  // ---- query blocks ----
  BindingTable eval_from(const QueryBlock& b) {
    const BlockInfo& info = *b.info;
    BindingTable acc;
    bool first = true;
    MatchOptions mo{opts_.threads, opts_.trace};
    for (std::size_t k = 0; k < b.from.size(); ++k) {
      const Atom& atom = b.from[k];
      BindingTable t;
      if (atom.relational) {
        std::shared_ptr<const Table> table;
        if (atom.table_slot >= 0) {
          const Value& v = frame_[atom.table_slot].value;
          if (!v.is_table()) runtime_error("table '" + atom.name + "' has not been produced yet", atom.pos);
          table = v.table_ptr();
        } else {
          const ContextEntry* e = ctx0_.find(atom.name);
          const Value* v = e ? std::get_if<Value>(e) : nullptr;
          if (!v || !v->is_table()) runtime_error("unknown table '" + atom.name + "'", atom.pos);
          table = v->table_ptr();
        }
        t = BindingTable({atom.var});
        t.reserve(table->rows.size());
        for (std::size_t r = 0; r < table->rows.size(); ++r) {
          Value cell(RowRef{table, r});
          t.add(std::span<const Value>(&cell, 1), 1);
        }
      } else {
        const GraphView& v = view(atom.name.empty() ? plan_->graph : atom.name);
        for (std::size_t p = 0; p < atom.paths.size(); ++p) {
          const PathPattern& pat = atom.paths[p];
          PathSpec spec;
          for (std::size_t i = 0; i < pat.nodes.size(); ++i) {
            const PatternNode& node = pat.nodes[i];
            NodeSpec ns;
            ns.type_ids = node.test.type_ids;
            if (node.test.set_slot >= 0) {
              const Value& sv = frame_[node.test.set_slot].value;
              if (!sv.is_vertex_set())
                runtime_error("vertex set '" + node.test.names[0] + "' is not assigned", node.pos);
              ns.set = sv.vertex_set_ptr();
            }
            int bound = info.bound_slots[k][p][i];
            if (bound >= 0) {
              ns.fixed = vertex_of(frame_[bound].value, node.pos);
            } else {
              ns.var = node.var;
            }
            spec.nodes.push_back(std::move(ns));
          }
          for (const auto& hop : pat.hops) spec.hops.push_back(HopSpec{hop.automaton, hop.var});
          spec.concat = info.path_concat[k][p];
          BindingTable m = match_path(v, spec, mo);
          t = p == 0 ? std::move(m) : join(t, m);
        }
      }
      acc = first ? std::move(t) : join(acc, t);
      first = false;
    }
    if (acc.vars() == info.vars) return acc;
    // Reorder columns to the checker's layout.
    std::vector<int> src;
    for (const auto& v : info.vars) src.push_back(acc.var_index(v));
    BindingTable out(info.vars);
    out.reserve(acc.size());
    std::vector<Value> row(info.vars.size());
    for (std::size_t i = 0; i < acc.size(); ++i) {
      auto r = acc.row(i);
      for (std::size_t c = 0; c < src.size(); ++c) row[c] = src[c] >= 0 ? r[src[c]] : Value();
      out.add(row, acc.multiplicity(i));
    }
    return out;
  }

  BindingTable eval_where(const QueryBlock& b, BindingTable B) const {
    if (!b.where) return B;
    std::vector<char> keep(B.size(), 0);
    detail::parallel_chunks(B.size(), opts_.threads, detail::default_chunks(B.size()),
                            [&](std::size_t, std::size_t begin, std::size_t end) {
                              Scope sc;
                              for (std::size_t i = begin; i < end; ++i) {
                                sc.row = B.row(i);
                                keep[i] = holds(eval(*b.where, sc), b.where->pos);
                              }
                            });
    return B.filter(std::vector<bool>(keep.begin(), keep.end()));
  }

  std::vector<Value> eval_columns(const OutTable& out, const BindingTable& B, const OutRow& r) const {
    Scope sc;
    if (r.rep != kNoRow) sc.row = B.row(r.rep);
    sc.table = &B;
    sc.members = &r.members;
    std::vector<Value> values;
    values.reserve(out.cols.size());
    for (const auto& c : out.cols) values.push_back(eval(*c.expr, sc));
    return values;
  }

  std::vector<OutRow> build_rows(const QueryBlock& b, std::size_t i, const BindingTable& B) const {
    const OutTable& out = b.outputs[i];
    const OutputInfo& oi = b.info->outputs[i];
    std::vector<OutRow> rows;
    if (oi.grouped) {
      const std::vector<ExprPtr>* keys = i < b.group_by.size() ? &b.group_by[i] : nullptr;
      std::map<std::vector<Value>, std::size_t, ValueVectorLess> index;
      for (std::size_t r = 0; r < B.size(); ++r) {
        std::vector<Value> key;
        if (keys) {
          Scope sc;
          sc.row = B.row(r);
          for (const auto& k : *keys) key.push_back(eval(*k, sc));
        }
        auto [it, fresh] = index.emplace(std::move(key), rows.size());
        if (fresh) {
          OutRow row;
          row.rep = r;
          rows.push_back(std::move(row));
        }
        rows[it->second].members.push_back(r);
      }
      if (rows.empty() && (!keys || keys->empty())) rows.emplace_back();
      for (auto& r : rows) r.values = eval_columns(out, B, r);
      if (out.distinct) dedupe(rows);
      return rows;
    }
    for (std::size_t r = 0; r < B.size(); ++r) {
      OutRow row;
      row.rep = r;
      row.members = {r};
      row.values = eval_columns(out, B, row);
      std::uint64_t copies = (oi.vertex_set || out.distinct) ? 1 : B.multiplicity(r);
      for (std::uint64_t c = 1; c < copies; ++c) rows.push_back(row);
      rows.push_back(std::move(row));
    }
    if (oi.vertex_set || out.distinct) dedupe(rows);
    return rows;
  }

  static void dedupe(std::vector<OutRow>& rows) {
    std::unordered_set<std::vector<Value>, RowsHash, RowsEq> seen;
    std::vector<OutRow> kept;
    kept.reserve(rows.size());
    for (auto& r : rows) {
      if (seen.insert(r.values).second) kept.push_back(std::move(r));
    }
    rows = std::move(kept);
  }

  void post_accum(const QueryBlock& b, const BindingTable& B, std::vector<OutRow>& rows) {
    const BlockInfo& info = *b.info;
    // Once per distinct output row, with variables bound from the columns.
    std::unordered_set<std::vector<Value>, RowsHash, RowsEq> seen;
    std::vector<std::vector<Value>> bound;
    for (const auto& r : rows) {
      if (!seen.insert(r.values).second) continue;
      std::vector<Value> row(info.vars.size());
      for (auto [var, col] : info.post_bindings) row[var] = r.values[col];
      bound.push_back(std::move(row));
    }
    auto inputs = generate_inputs(
        b.post_accum, info.post_locals, bound.size(),
        [&](std::size_t i) { return std::span<const Value>(bound[i]); },
        [](std::size_t) { return std::uint64_t{1}; });
    aggregate(inputs);
    for (auto& r : rows) r.values = eval_columns(b.outputs[0], B, r);
    const OutputInfo& oi = info.outputs[0];
    if (oi.vertex_set || b.outputs[0].distinct) dedupe(rows);
  }

  void having(const QueryBlock& b, std::size_t i, const BindingTable& B, std::vector<OutRow>& rows) const {
    if (i >= b.having.size() || !b.having[i]) return;
    std::vector<OutRow> kept;
    for (auto& r : rows) {
      Scope sc;
      if (r.rep != kNoRow) sc.row = B.row(r.rep);
      sc.table = &B;
      sc.members = &r.members;
      sc.aliases = r.values;
      if (holds(eval(*b.having[i], sc), b.having[i]->pos)) kept.push_back(std::move(r));
    }
    rows = std::move(kept);
  }

  void order_by(const QueryBlock& b, std::size_t i, const BindingTable& B, std::vector<OutRow>& rows) const {
    if (i >= b.order_by.size() || b.order_by[i].empty()) return;
    const auto& items = b.order_by[i];
    std::vector<std::vector<Value>> keys(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      Scope sc;
      if (rows[r].rep != kNoRow) sc.row = B.row(rows[r].rep);
      sc.table = &B;
      sc.members = &rows[r].members;
      sc.aliases = rows[r].values;
      for (const auto& item : items) {
        Value k = eval(*item.expr, sc);
        if (k.is_collection() || k.is_map() || k.is_vertex_set() || k.is_table())
          runtime_error("ORDER BY needs an ordered type, got " + to_debug_string(k), item.expr->pos);
        keys[r].push_back(std::move(k));
      }
    }
    std::vector<std::size_t> perm(rows.size());
    for (std::size_t r = 0; r < perm.size(); ++r) perm[r] = r;
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) {
      for (std::size_t k = 0; k < items.size(); ++k) {
        int c = compare(keys[x][k], keys[y][k]);
        if (c != 0) return items[k].descending ? c > 0 : c < 0;
      }
      return false;
    });
    std::vector<OutRow> sorted;
    sorted.reserve(rows.size());
    for (std::size_t r : perm) sorted.push_back(std::move(rows[r]));
    rows = std::move(sorted);
  }

  void limit(const QueryBlock& b, std::size_t i, std::vector<OutRow>& rows) const {
    if (i >= b.limit.size() || !b.limit[i]) return;
    std::int64_t n = as_count(eval(*b.limit[i], Scope{}), "LIMIT", b.limit[i]->pos);
    if (n < 0) runtime_error("LIMIT must not be negative", b.limit[i]->pos);
    if (rows.size() > static_cast<std::size_t>(n)) rows.resize(static_cast<std::size_t>(n));
  }

  void run_block(const QueryBlock& b) {
    const BlockInfo& info = *b.info;
    BindingTable B = eval_where(b, eval_from(b));

    // A' read inside ACCUM is the value just before this block's aggregation.
    refresh_primes();
    std::vector<AccInput> inputs;
    if (b.has_accum) {
      inputs = generate_inputs(
          b.accum, info.accum_locals, B.size(), [&](std::size_t i) { return B.row(i); },
          [&](std::size_t i) { return B.multiplicity(i); });
    }
    aggregate(inputs);

    std::vector<std::vector<OutRow>> outs(b.outputs.size());
    for (std::size_t i = 0; i < b.outputs.size(); ++i) outs[i] = build_rows(b, i, B);
    if (b.has_post_accum) post_accum(b, B, outs[0]);
    for (std::size_t i = 0; i < b.outputs.size(); ++i) {
      having(b, i, B, outs[i]);
      order_by(b, i, B, outs[i]);
      limit(b, i, outs[i]);
      bind_output(b, i, outs[i]);
    }
  }

  void bind_output(const QueryBlock& b, std::size_t i, const std::vector<OutRow>& rows) {
    const OutputInfo& oi = b.info->outputs[i];
    const OutTable& out = b.outputs[i];
    Table table;
    table.name = out.into.empty() ? (i == 0 && !b.target.empty() ? b.target : "result") : out.into;
    table.columns = oi.columns;
    table.rows.reserve(rows.size());
    for (const auto& r : rows) table.rows.push_back(r.values);
    Value bound;
    if (oi.vertex_set) {
      std::vector<VertexId> vs;
      vs.reserve(rows.size());
      for (const auto& r : rows) vs.push_back(r.values[0].as_vertex());
      bound = Value(VertexSet::from_unique(std::move(vs)));
    } else {
      bound = Value(std::make_shared<const Table>(table));
    }
    if (oi.into_slot >= 0) frame_[oi.into_slot].value = bound;
    if (i == 0 && b.info->target_slot >= 0) frame_[b.info->target_slot].value = bound;
    if (!out.into.empty()) {
      tables_[out.into] = std::move(table);
    } else if (bare_ && b.target.empty()) {
      tables_["result"] = std::move(table);
    }
  }

  Context export_context() const {
    std::vector<std::pair<std::string, ContextEntry>> entries;
    for (std::size_t i = 0; i < frame_.size(); ++i) {
      const SlotInfo& info = plan_->slots[i];
      const SlotState& st = frame_[i];
      switch (info.kind) {
        case SlotKind::GlobalAcc:
          entries.emplace_back(info.name, st.acc);
          entries.emplace_back(info.name + "'", st.acc_prime);
          break;
        case SlotKind::VertexAcc:
          if (st.vacc) {
            entries.emplace_back(info.name, VertexAccums(st.vacc));
            entries.emplace_back(info.name + "'", VertexAccums(st.vacc_prime));
          }
          break;
        default:
          entries.emplace_back(info.name, st.value);
          break;
      }
    }
    entries.emplace_back("DG", Value(plan_->graph));
    return ctx0_.override(entries);
  }

  // ---- expression helpers ----
  Value eval_aggregate(const Expr& e, const Scope& sc) const;
  Value eval_builtin(const Expr& e, const Scope& sc) const;
  Value eval_method(const Expr& e, const Scope& sc) const;
  Value lookup_name(const std::string& name) const {
    const ContextEntry* entry = ctx0_.find(name);
    if (!entry) runtime_error("unknown name '" + name + "'");
    if (const Value* v = std::get_if<Value>(entry)) return *v;
    runtime_error("'" + name + "' is not a plain value");
  }

  const Graph* g_;
  const Context& ctx0_;
  const QueryPlan* plan_;
  EvalOptions opts_;
  std::vector<SlotState> frame_;
  std::map<std::string, std::unique_ptr<GraphView>> views_;
  std::map<std::string, Table> tables_;
  std::vector<std::string> warnings_;
  bool bare_ = false;
};

Value Evaluator::eval_aggregate(const Expr& e, const Scope& sc) const {
  if (!sc.table || !sc.members) runtime_error("aggregate outside a SELECT", e.pos);
  const Expr& arg = *e.args[0];
  std::uint64_t count = 0;
  bool all_int = true;
  std::int64_t isum = 0;
  double dsum = 0.0;
  Value best;
  for (std::size_t r : *sc.members) {
    Scope inner;
    inner.row = sc.table->row(r);
    inner.locals = sc.locals;
    Value v = eval(arg, inner);
    if (v.is_null()) continue;
    std::uint64_t m = sc.table->multiplicity(r);
    count += m;
    switch (e.builtin) {
      case Builtin::Sum:
      case Builtin::Avg:
        if (!v.is_numeric()) runtime_error(e.name + " needs numbers, got " + to_debug_string(v), e.pos);
        if (v.is_int()) {
          isum += v.as_int() * static_cast<std::int64_t>(m);
          dsum += static_cast<double>(v.as_int()) * static_cast<double>(m);
        } else {
          all_int = false;
          dsum += v.as_double() * static_cast<double>(m);
        }
        break;
      case Builtin::Min:
        if (best.is_null() || compare(v, best) < 0) best = v;
        break;
      case Builtin::Max:
        if (best.is_null() || compare(v, best) > 0) best = v;
        break;
      default:
        break;
    }
  }
  switch (e.builtin) {
    case Builtin::Count:
      return Value(static_cast<std::int64_t>(count));
    case Builtin::Sum:
      if (count == 0) return Value();
      return all_int ? Value(isum) : Value(dsum);
    case Builtin::Avg:
      if (count == 0) return Value();
      return Value(dsum / static_cast<double>(count));
    default:
      return best;
  }
}

Value Evaluator::eval_builtin(const Expr& e, const Scope& sc) const {
  Builtin b = e.builtin;
  if (b == Builtin::None) {
    static const std::unordered_map<std::string, Builtin> kNames = {
        {"count", Builtin::Count}, {"sum", Builtin::Sum},     {"min", Builtin::Min},
        {"max", Builtin::Max},     {"avg", Builtin::Avg},     {"log", Builtin::Log},
        {"abs", Builtin::Abs},     {"sqrt", Builtin::Sqrt},   {"pow", Builtin::Pow},
        {"floor", Builtin::Floor}, {"ceil", Builtin::Ceil},   {"to_string", Builtin::ToString},
        {"to_datetime", Builtin::ToDatetime}, {"year", Builtin::Year}, {"getvid", Builtin::GetVid},
        {"size", Builtin::Size},   {"outdegree", Builtin::Outdegree}};
    auto it = kNames.find(lower(e.name));
    if (it == kNames.end()) runtime_error("unknown function '" + e.name + "'", e.pos);
    b = it->second;
  }
  if (e.aggregate) return eval_aggregate(e, sc);
  if (e.args.empty()) runtime_error(e.name + " needs an argument", e.pos);
  Value x = eval(*e.args[0], sc);
  if (x.is_null() && b != Builtin::Count && b != Builtin::ToString) return Value();
  auto number = [&]() {
    if (!x.is_numeric()) runtime_error(e.name + " needs a number, got " + to_debug_string(x), e.pos);
    return x.as_number();
  };
  switch (b) {
    case Builtin::Count:
      if (x.is_null()) return Value(std::int64_t{0});
      return Value(static_cast<std::int64_t>(items_of(x, e.pos).size()));
    case Builtin::Sum:
    case Builtin::Avg:
    case Builtin::Min:
    case Builtin::Max: {
      std::vector<Value> items;
      if (x.is_map()) {
        for (const auto& [k, v] : x.as_map().entries) items.push_back(v);
      } else {
        items = items_of(x, e.pos);
      }
      if (items.empty()) return Value();
      if (b == Builtin::Min) return *std::min_element(items.begin(), items.end(), ValueLess());
      if (b == Builtin::Max) return *std::max_element(items.begin(), items.end(), ValueLess());
      Value sum(std::int64_t{0});
      for (const auto& v : items) sum = arith(Op::Add, sum, v, e.pos);
      if (b == Builtin::Sum) return sum;
      return Value(sum.as_number() / static_cast<double>(items.size()));
    }
    case Builtin::Log: {
      double v = number();
      if (v <= 0.0) runtime_error("log of a non-positive value", e.pos);
      return Value(std::log(v));
    }
    case Builtin::Abs:
      if (x.is_int()) return Value(x.as_int() < 0 ? -x.as_int() : x.as_int());
      return Value(std::fabs(number()));
    case Builtin::Sqrt: {
      double v = number();
      if (v < 0.0) runtime_error("sqrt of a negative value", e.pos);
      return Value(std::sqrt(v));
    }
    case Builtin::Pow: {
      Value y = eval(*e.args[1], sc);
      if (y.is_null()) return Value();
      if (!y.is_numeric()) runtime_error("pow needs numbers", e.pos);
      return Value(std::pow(number(), y.as_number()));
    }
    case Builtin::Floor:
      if (x.is_int()) return x;
      return Value(static_cast<std::int64_t>(std::floor(number())));
    case Builtin::Ceil:
      if (x.is_int()) return x;
      return Value(static_cast<std::int64_t>(std::ceil(number())));
    case Builtin::ToString:
      if (x.is_string()) return x;
      if (x.is_vertex()) return Value(g_->pk_text(x.as_vertex()));
      if (x.is_datetime()) return Value(format_datetime(x.as_datetime()));
      return Value(to_debug_string(x));
    case Builtin::ToDatetime:
      if (!x.is_string()) runtime_error("to_datetime needs a string", e.pos);
      return Value(parse_datetime(x.as_string()));
    case Builtin::Year:
      if (!x.is_datetime()) runtime_error("year needs a datetime", e.pos);
      return Value(std::int64_t{datetime_year(x.as_datetime())});
    case Builtin::GetVid:
      return Value(std::int64_t{vertex_of(x, e.pos).value});
    case Builtin::Size:
      if (x.is_string()) return Value(static_cast<std::int64_t>(x.as_string().size()));
      if (x.is_table()) return Value(static_cast<std::int64_t>(x.as_table().rows.size()));
      return Value(static_cast<std::int64_t>(items_of(x, e.pos).size()));
    case Builtin::Outdegree:
      return Value(static_cast<std::int64_t>(g_->outdegree(vertex_of(x, e.pos), e.type_ids)));
    default:
      runtime_error("unknown function '" + e.name + "'", e.pos);
  }
}

Value Evaluator::eval_method(const Expr& e, const Scope& sc) const {
  std::string m = lower(e.member);
  Value base = eval(*e.args[0], sc);
  if (m == "contains") {
    if (base.is_null()) return Value();
    return Value(contains_value(base, eval(*e.args[1], sc), e.pos));
  }
  if (base.is_null()) return Value();
  if (m == "outdegree") {
    std::vector<int> filter = e.type_ids;
    if (filter.empty() && e.args.size() > 1) {
      for (std::size_t i = 1; i < e.args.size(); ++i) {
        Value name = eval(*e.args[i], sc);
        const EdgeTypeDef* et = name.is_string() ? g_->catalog().find_edge_type(name.as_string()) : nullptr;
        if (!et) runtime_error("unknown edge type " + to_debug_string(name), e.pos);
        filter.push_back(et->id);
      }
    }
    return Value(static_cast<std::int64_t>(g_->outdegree(vertex_of(base, e.pos), filter)));
  }
  if (m == "size") {
    if (base.is_string()) return Value(static_cast<std::int64_t>(base.as_string().size()));
    if (base.is_table()) return Value(static_cast<std::int64_t>(base.as_table().rows.size()));
    return Value(static_cast<std::int64_t>(items_of(base, e.pos).size()));
  }
  runtime_error("unknown method '" + e.member + "'", e.pos);
}

Value Evaluator::eval(const Expr& e, const Scope& sc) const {
  switch (e.kind) {
    case ExprKind::Literal:
      return e.literal;
    case ExprKind::Ident:
      switch (e.ref.kind) {
        case RefKind::Global:
          return frame_[e.ref.index].value;
        case RefKind::BlockVar:
          return static_cast<std::size_t>(e.ref.index) < sc.row.size() ? sc.row[e.ref.index] : Value();
        case RefKind::Local:
          return (*sc.locals)[e.ref.index];
        case RefKind::Alias:
          return static_cast<std::size_t>(e.ref.index) < sc.aliases.size() ? sc.aliases[e.ref.index]
                                                                           : Value();
        case RefKind::None:
          return lookup_name(e.name);
      }
      return Value();
    case ExprKind::Attr: {
      Value base = eval(*e.args[0], sc);
      if (base.is_null()) return Value();
      if (e.member == "type") {
        if (base.is_vertex()) return Value(g_->vertex_type_name(base.as_vertex()));
        if (base.is_edge()) return Value(g_->edge_type_name(base.as_edge()));
      }
      try {
        return read_attribute(g_, base, e.member);
      } catch (const Error& err) {
        runtime_error(err.message(), e.pos);
      }
    }
    case ExprKind::GlobalAcc: {
      if (e.slot < 0) {
        std::string key = "@@" + e.name + (e.primed ? "'" : "");
        const ContextEntry* entry = ctx0_.find(key);
        const auto* acc = entry ? std::get_if<AccumValue>(entry) : nullptr;
        if (!acc) runtime_error("unknown accumulator '" + key + "'", e.pos);
        return read_accum(*acc);
      }
      if (e.primed) return read_accum(frame_[e.slot].acc_prime);
      return read_accum(*current_acc(e.slot, kGlobal, sc));
    }
    case ExprKind::VertexAcc: {
      Value base = eval(*e.args[0], sc);
      if (base.is_null()) return Value();
      VertexId v = vertex_of(base, e.pos);
      if (e.slot < 0) {
        std::string key = "@" + e.member + (e.primed ? "'" : "");
        const ContextEntry* entry = ctx0_.find(key);
        const auto* accs = entry ? std::get_if<VertexAccums>(entry) : nullptr;
        if (!accs || !*accs || v.value >= (*accs)->size())
          runtime_error("unknown accumulator '" + key + "'", e.pos);
        return read_accum((**accs)[v.value]);
      }
      if (e.primed) {
        const auto& p = frame_[e.slot].vacc_prime;
        if (!p) runtime_error("accumulator '@" + e.member + "' is not declared", e.pos);
        return read_accum((*p)[v.value]);
      }
      return read_accum(*current_acc(e.slot, v.value, sc));
    }
    case ExprKind::Unary: {
      Value x = eval(*e.args[0], sc);
      if (x.is_null()) return x;
      if (e.op == Op::Not) return Value(!*truth(x, e.pos));
      if (x.is_int()) return Value(-x.as_int());
      if (x.is_double()) return Value(-x.as_double());
      runtime_error("unary minus needs a number", e.pos);
    }
    case ExprKind::Binary: {
      if (e.op == Op::And || e.op == Op::Or) {
        bool is_and = e.op == Op::And;
        auto a = truth(eval(*e.args[0], sc), e.pos);
        if (a && *a != is_and) return Value(!is_and);
        auto b = truth(eval(*e.args[1], sc), e.pos);
        if (b && *b != is_and) return Value(!is_and);
        if (!a || !b) return Value();
        return Value(is_and);
      }
      Value a = eval(*e.args[0], sc);
      Value b = eval(*e.args[1], sc);
      switch (e.op) {
        case Op::Eq:
        case Op::Ne:
        case Op::Lt:
        case Op::Le:
        case Op::Gt:
        case Op::Ge: {
          auto c = compare_values(a, b);
          if (!c) return Value();
          switch (e.op) {
            case Op::Eq:
              return Value(*c == 0);
            case Op::Ne:
              return Value(*c != 0);
            case Op::Lt:
              return Value(*c < 0);
            case Op::Le:
              return Value(*c <= 0);
            case Op::Gt:
              return Value(*c > 0);
            default:
              return Value(*c >= 0);
          }
        }
        case Op::Contains:
          if (a.is_null() || b.is_null()) return Value();
          return Value(contains_value(a, b, e.pos));
        case Op::Union:
        case Op::Intersect:
        case Op::Minus:
          return set_op(e.op, a, b, e.pos);
        case Op::Sub:
          if ((a.is_vertex_set() || a.is_collection()) && (b.is_vertex_set() || b.is_collection()))
            return set_op(Op::Minus, a, b, e.pos);
          return arith(e.op, a, b, e.pos);
        default:
          return arith(e.op, a, b, e.pos);
      }
    }
    case ExprKind::Between: {
      Value x = eval(*e.args[0], sc);
      auto lo = compare_values(x, eval(*e.args[1], sc));
      auto hi = compare_values(x, eval(*e.args[2], sc));
      if (!lo || !hi) return Value();
      return Value((*lo >= 0 && *hi <= 0) != e.negated);
    }
    case ExprKind::In: {
      Value x = eval(*e.args[0], sc);
      Value c = eval(*e.args[1], sc);
      if (x.is_null() || c.is_null()) return Value();
      return Value(contains_value(c, x, e.pos) != e.negated);
    }
    case ExprKind::Like: {
      Value x = eval(*e.args[0], sc);
      Value p = eval(*e.args[1], sc);
      if (x.is_null() || p.is_null()) return Value();
      if (!x.is_string() || !p.is_string()) runtime_error("LIKE needs strings", e.pos);
      return Value(like_match(x.as_string(), p.as_string()) != e.negated);
    }
    case ExprKind::IsNull:
      return Value(eval(*e.args[0], sc).is_null() != e.negated);
    case ExprKind::Call:
      return eval_builtin(e, sc);
    case ExprKind::Method:
      return eval_method(e, sc);
    case ExprKind::Case:
    case ExprKind::CaseValue: {
      std::size_t i = 0;
      Value subject;
      if (e.kind == ExprKind::CaseValue) subject = eval(*e.args[i++], sc);
      std::size_t end = e.args.size() - (e.has_else ? 1 : 0);
      for (; i < end; i += 2) {
        Value c = eval(*e.args[i], sc);
        bool hit = e.kind == ExprKind::CaseValue ? compare_values(subject, c) == 0 : holds(c, e.pos);
        if (hit) return eval(*e.args[i + 1], sc);
      }
      return e.has_else ? eval(*e.args.back(), sc) : Value();
    }
    case ExprKind::Tuple: {
      std::vector<Value> items;
      for (const auto& a : e.args) items.push_back(eval(*a, sc));
      return make_tuple(std::move(items));
    }
    case ExprKind::List: {
      std::vector<Value> items;
      for (const auto& a : e.args) items.push_back(eval(*a, sc));
      return make_collection(CollectionKind::List, std::move(items));
    }
    case ExprKind::MapEntry:
      return make_collection(CollectionKind::MapEntry, {eval(*e.args[0], sc), eval(*e.args[1], sc)});
    case ExprKind::SeedSet: {
      std::vector<int> types = e.type_ids;
      if (types.empty()) {
        for (const auto& a : e.args) {
          const VertexTypeDef* vt = g_->catalog().find_vertex_type(a->name);
          if (!vt) runtime_error("unknown vertex type '" + a->name + "'", a->pos);
          types.push_back(vt->id);
        }
      }
      std::vector<VertexId> vs;
      for (int t : types) {
        const auto& of = g_->vertices_of_type(t);
        vs.insert(vs.end(), of.begin(), of.end());
      }
      return Value(VertexSet::from_any(vs));
    }
    case ExprKind::SetLit: {
      std::vector<Value> items;
      bool vertices = !e.args.empty();
      for (const auto& a : e.args) {
        items.push_back(eval(*a, sc));
        vertices = vertices && items.back().is_vertex();
      }
      if (vertices) {
        std::vector<VertexId> vs;
        for (const auto& v : items) vs.push_back(v.as_vertex());
        return Value(VertexSet::from_any(vs));
      }
      return make_collection(CollectionKind::Set, std::move(items));
    }
    case ExprKind::Index: {
      Value base = eval(*e.args[0], sc);
      Value key = eval(*e.args[1], sc);
      if (base.is_null()) return Value();
      if (base.is_map()) {
        const auto& entries = base.as_map().entries;
        auto it = std::lower_bound(entries.begin(), entries.end(), key, [](const auto& p, const Value& k) {
          return compare(p.first, k) < 0;
        });
        if (it == entries.end() || !(it->first == key))
          runtime_error("map key " + to_debug_string(key) + " is absent", e.pos);
        return it->second;
      }
      if (base.is_collection()) {
        const auto& items = base.as_collection().items;
        std::int64_t i = as_count(key, "index", e.pos);
        if (i < 0 || static_cast<std::size_t>(i) >= items.size())
          runtime_error("index " + std::to_string(i) + " is out of range", e.pos);
        return items[static_cast<std::size_t>(i)];
      }
      runtime_error("cannot index " + to_debug_string(base), e.pos);
    }
  }
  return Value();
}

}  // namespace

QueryResult run_query(const Graph& g, const Context& ctx0, const CheckedQuery& q,
                      const std::vector<Value>& args, const EvalOptions& opts) {
  if (!q.query || !q.plan) fail(ErrorKind::Runtime, "query has not been checked");
  Evaluator ev(&g, ctx0, q.plan.get(), opts);
  QueryResult out = ev.run(*q.query, args);
  out.warnings.insert(out.warnings.begin(), q.warnings.begin(), q.warnings.end());
  return out;
}

Value eval_expr(const Graph* g, const Context& ctx, const Expr& e) {
  QueryPlan empty;
  Evaluator ev(g, ctx, &empty, EvalOptions{});
  return ev.eval(e, Scope{});
}

bool like_match(std::string_view text, std::string_view pattern) {
  std::size_t t = 0, p = 0;
  std::size_t star_p = std::string_view::npos, star_t = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '_' || pattern[p] == text[t])) {
      ++t;
      ++p;
    } else if (p < pattern.size() && pattern[p] == '%') {
      star_p = p++;
      star_t = t;
    } else if (star_p != std::string_view::npos) {
      p = star_p + 1;
      t = ++star_t;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '%') ++p;
  return p == pattern.size();
}

Value parse_argument(const Graph& g, const TypeAst& type, const std::string& text) {
  auto usage = [&](const std::string& what) -> Value {
    fail(ErrorKind::Usage, "cannot read '" + text + "' as " + what);
  };
  if (type.cat == TypeAst::Cat::Set || type.cat == TypeAst::Cat::Bag) {
    std::vector<Value> items;
    std::size_t start = 0;
    while (start <= text.size() && !text.empty()) {
      std::size_t comma = text.find(',', start);
      std::string part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      items.push_back(parse_argument(g, type.params[0], part));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return make_collection(type.cat == TypeAst::Cat::Set ? CollectionKind::Set : CollectionKind::Bag,
                           std::move(items));
  }
  if (type.cat != TypeAst::Cat::Base) fail(ErrorKind::Usage, "unsupported parameter type");
  const ElemType& t = type.base;
  switch (t.kind) {
    case ScalarKind::Int:
    case ScalarKind::UInt: {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || ptr != text.data() + text.size()) return usage("an integer");
      if (t.kind == ScalarKind::UInt && v < 0) return usage("an unsigned integer");
      return Value(v);
    }
    case ScalarKind::Float:
    case ScalarKind::Double: {
      double v = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || ptr != text.data() + text.size()) return usage("a number");
      return Value(v);
    }
    case ScalarKind::String:
      return Value(text);
    case ScalarKind::Bool:
      if (lower(text) == "true") return Value(true);
      if (lower(text) == "false") return Value(false);
      return usage("a boolean");
    case ScalarKind::Datetime: {
      Datetime d;
      if (!try_parse_datetime(text, &d)) return usage("a datetime");
      return Value(d);
    }
    case ScalarKind::Vertex: {
      std::string vtype = t.type_name;
      std::string key = text;
      if (vtype.empty()) {
        auto colon = text.find(':');
        if (colon == std::string::npos) return usage("a vertex (write Type:key)");
        vtype = text.substr(0, colon);
        key = text.substr(colon + 1);
      }
      const VertexTypeDef* vt = g.catalog().find_vertex_type(vtype);
      if (!vt) fail(ErrorKind::Usage, "unknown vertex type '" + vtype + "'");
      auto v = g.lookup(vt->id, key);
      if (!v) fail(ErrorKind::Usage, "no " + vtype + " vertex with key '" + key + "'");
      return Value(*v);
    }
    default:
      return usage(elem_type_name(t));
  }
}

}  // namespace gsql
