#include "gsql/checker.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "gsql/darpe.hpp"
#include "gsql/printer.hpp"

namespace gsql {

namespace {

enum class Clause { Top, Where, Accum, PostAccum, Select, GroupBy, Having, OrderBy, Limit };

[[noreturn]] void sem_error(const std::string& message, SourcePos pos) {
  fail(ErrorKind::Semantic, message, pos);
}

SemType of(TypeKind k) { return SemType::of(k); }

SemType with_elem(TypeKind k, SemType elem) {
  SemType t = of(k);
  t.elem = std::make_shared<const SemType>(std::move(elem));
  return t;
}

SemType named(TypeKind k, std::string name) {
  SemType t = of(k);
  t.name = std::move(name);
  return t;
}

bool known(const SemType& t) { return t.kind != TypeKind::Unknown && t.kind != TypeKind::Null; }
bool numeric(const SemType& t) { return t.kind == TypeKind::Int || t.kind == TypeKind::Double; }
bool setlike(const SemType& t) {
  return t.kind == TypeKind::VertexSet || t.kind == TypeKind::Set || t.kind == TypeKind::Bag ||
         t.kind == TypeKind::List;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

SemType literal_type(const Value& v) {
  if (v.is_null()) return of(TypeKind::Null);
  if (v.is_bool()) return of(TypeKind::Bool);
  if (v.is_int()) return of(TypeKind::Int);
  if (v.is_double()) return of(TypeKind::Double);
  if (v.is_string()) return of(TypeKind::String);
  if (v.is_datetime()) return of(TypeKind::Datetime);
  return of(TypeKind::Unknown);
}

// Whether a value of type `got` may flow into a slot of type `want`.
bool compatible(const SemType& want, const SemType& got) {
  if (!known(want) || !known(got)) return true;
  if (numeric(want)) return numeric(got);
  if (want.kind == TypeKind::Vertex && got.kind == TypeKind::Vertex) {
    return want.name.empty() || got.name.empty() || want.name == got.name;
  }
  if (want.kind == TypeKind::VertexSet) return got.kind == TypeKind::VertexSet;
  if (setlike(want)) return setlike(got);
  return want.kind == got.kind;
}

bool comparable(const SemType& a, const SemType& b) {
  if (!known(a) || !known(b)) return true;
  if (numeric(a) && numeric(b)) return true;
  // A datetime compares against an integer year.
  if ((a.kind == TypeKind::Datetime && b.kind == TypeKind::Int) ||
      (a.kind == TypeKind::Int && b.kind == TypeKind::Datetime))
    return true;
  if (a.kind == TypeKind::Vertex && b.kind == TypeKind::Vertex) return true;
  return a.kind == b.kind;
}

SemType acc_read_type(const AccSpec& spec) {
  switch (spec.kind) {
    case AccKind::Sum:
    case AccKind::Min:
    case AccKind::Max:
      return sem_type_of(spec.elem);
    case AccKind::Avg:
      return of(TypeKind::Double);
    case AccKind::Or:
    case AccKind::And:
      return of(TypeKind::Bool);
    case AccKind::Set:
      return with_elem(TypeKind::Set, sem_type_of(spec.elem));
    case AccKind::Bag:
      return with_elem(TypeKind::Bag, sem_type_of(spec.elem));
    case AccKind::List:
    case AccKind::Heap:
      return with_elem(TypeKind::List, sem_type_of(spec.elem));
    case AccKind::Map: {
      SemType t = with_elem(TypeKind::Map, sem_type_of(spec.elem));
      t.value = std::make_shared<const SemType>(spec.map_value_acc ? acc_read_type(*spec.map_value_acc)
                                                                   : sem_type_of(*spec.map_value_base));
      return t;
    }
    default:
      return of(TypeKind::Unknown);
  }
}

// The input type a `+=` on this accumulator expects, Unknown when several
// shapes are accepted.
SemType acc_input_type(const AccSpec& spec) {
  switch (spec.kind) {
    case AccKind::Sum:
    case AccKind::Min:
    case AccKind::Max:
      return sem_type_of(spec.elem);
    case AccKind::Avg:
      return of(TypeKind::Double);
    case AccKind::Or:
    case AccKind::And:
      return of(TypeKind::Bool);
    default:
      return of(TypeKind::Unknown);
  }
}

DarpePtr clone_darpe(const Darpe& d) {
  auto out = std::make_unique<Darpe>();
  out->kind = d.kind;
  out->edge_type = d.edge_type;
  out->dir = d.dir;
  out->lo = d.lo;
  out->hi = d.hi;
  out->has_bounds = d.has_bounds;
  out->pos = d.pos;
  for (const auto& k : d.kids) out->kids.push_back(clone_darpe(*k));
  return out;
}

std::string column_name(const Column& c, const std::string& printed) {
  if (!c.alias.empty()) return c.alias;
  if (c.expr->kind == ExprKind::Ident) return c.expr->name;
  if (c.expr->kind == ExprKind::Attr) return c.expr->member;
  return printed;
}

std::string expr_text(const Expr& e) { return print_expr(e); }

class Checker {
 public:
  Checker(const CheckEnv& env, QueryPlan& plan, std::vector<std::string>& warnings)
      : env_(env), plan_(plan), warnings_(warnings) {
    for (const auto& [name, cols] : env.tables) table_columns_[name] = cols;
  }

  void run(Query& q) {
    const Catalog& c = cat();
    if (!q.graph.empty()) {
      if (!c.find_graph(q.graph)) sem_error("unknown graph '" + q.graph + "'", q.pos);
      plan_.graph = q.graph;
    } else if (!env_.default_graph.empty()) {
      if (!c.find_graph(env_.default_graph))
        sem_error("unknown graph '" + env_.default_graph + "'", q.pos);
      plan_.graph = env_.default_graph;
    } else if (c.graphs().size() == 1) {
      plan_.graph = c.graphs().begin()->first;
    }
    for (auto& p : q.params) {
      SemType t = param_type(p.type);
      int slot = add_slot(p.name, SlotKind::Param, t, p.pos);
      plan_.param_slots.push_back(slot);
    }
    check_stmts(q.body, false);
    if (q.ret) check_expr(*q.ret);
  }

 private:
  const Catalog& cat() const { return *env_.catalog; }

  // ---- slots ----
  int find_slot(const std::string& name) const {
    auto it = slot_index_.find(name);
    return it == slot_index_.end() ? -1 : it->second;
  }

  int add_slot(const std::string& name, SlotKind kind, SemType type, SourcePos pos) {
    if (find_slot(name) >= 0) sem_error("'" + name + "' is already declared", pos);
    SlotInfo s;
    s.name = name;
    s.kind = kind;
    s.type = std::move(type);
    plan_.slots.push_back(std::move(s));
    int idx = static_cast<int>(plan_.slots.size()) - 1;
    slot_index_[name] = idx;
    return idx;
  }

  int ensure_slot(const std::string& name, SlotKind kind, SemType type, SourcePos pos) {
    int idx = find_slot(name);
    if (idx < 0) return add_slot(name, kind, std::move(type), pos);
    SlotInfo& s = plan_.slots[idx];
    if (s.kind == SlotKind::GlobalAcc || s.kind == SlotKind::VertexAcc)
      sem_error("'" + name + "' is an accumulator", pos);
    if (s.kind != SlotKind::Param) {
      if (s.kind != kind) s.type = of(TypeKind::Unknown);
      s.kind = kind;
      if (known(type) && known(s.type) && s.type.kind != type.kind) s.type = of(TypeKind::Unknown);
    }
    return idx;
  }

  SemType param_type(const TypeAst& t) {
    switch (t.cat) {
      case TypeAst::Cat::Base:
        return elem_type(t.base, t.pos);
      case TypeAst::Cat::Set:
        return with_elem(TypeKind::Set, elem_type(t.params[0].base, t.pos));
      case TypeAst::Cat::Bag:
        return with_elem(TypeKind::Bag, elem_type(t.params[0].base, t.pos));
      case TypeAst::Cat::Map: {
        SemType m = with_elem(TypeKind::Map, elem_type(t.params[0].base, t.pos));
        m.value = std::make_shared<const SemType>(elem_type(t.params[1].base, t.pos));
        return m;
      }
      case TypeAst::Cat::Acc:
        break;
    }
    sem_error("accumulator types cannot be parameters", t.pos);
  }

  SemType elem_type(const ElemType& t, SourcePos pos) {
    if (t.kind == ScalarKind::Vertex && !t.type_name.empty() && !cat().find_vertex_type(t.type_name))
      sem_error("unknown vertex type '" + t.type_name + "'", pos);
    if (t.kind == ScalarKind::Edge && !t.type_name.empty() && !cat().find_edge_type(t.type_name))
      sem_error("unknown edge type '" + t.type_name + "'", pos);
    return sem_type_of(t);
  }

  std::shared_ptr<const AccSpec> make_spec(const TypeAst& t) {
    if (!acc_kind_supported(t.acc)) sem_error(acc_kind_name(t.acc) + " is not supported", t.pos);
    auto spec = std::make_shared<AccSpec>();
    spec->kind = t.acc;
    auto base_param = [&](std::size_t i) -> const ElemType& {
      if (i >= t.params.size() || t.params[i].cat != TypeAst::Cat::Base)
        sem_error(acc_kind_name(t.acc) + " needs a base element type", t.pos);
      elem_type(t.params[i].base, t.params[i].pos);
      return t.params[i].base;
    };
    switch (t.acc) {
      case AccKind::Or:
      case AccKind::And:
        break;
      case AccKind::Map: {
        spec->elem = base_param(0);
        const TypeAst& v = t.params[1];
        if (v.cat == TypeAst::Cat::Acc) {
          spec->map_value_acc = make_spec(v);
          if (v.acc == AccKind::Heap) sem_error("HeapAccum is not supported as a map value", v.pos);
        } else if (v.cat == TypeAst::Cat::Base) {
          elem_type(v.base, v.pos);
          spec->map_value_base = v.base;
        } else {
          sem_error("unsupported map value type", v.pos);
        }
        break;
      }
      case AccKind::Heap: {
        spec->elem = base_param(0);
        if (spec->elem.kind != ScalarKind::Tuple)
          sem_error("HeapAccum needs a tuple element type", t.pos);
        for (const auto& [field, desc] : t.heap_order) {
          int idx = -1;
          for (std::size_t i = 0; i < spec->elem.fields.size(); ++i) {
            if (spec->elem.fields[i].second == field) idx = static_cast<int>(i);
          }
          if (idx < 0) sem_error("unknown heap field '" + field + "'", t.pos);
          spec->heap_order.push_back(HeapKey{idx, desc});
        }
        break;
      }
      default:
        spec->elem = base_param(0);
        if ((t.acc == AccKind::Sum || t.acc == AccKind::Avg) && !is_numeric(spec->elem.kind) &&
            !(t.acc == AccKind::Sum && spec->elem.kind == ScalarKind::String))
          sem_error(acc_kind_name(t.acc) + " needs a numeric element type", t.pos);
        break;
    }
    return spec;
  }

  // ---- statements ----
  void check_stmts(std::vector<StmtPtr>& stmts, bool acc) {
    for (auto& s : stmts) check_stmt(*s, acc);
  }

  void check_stmt(Stmt& s, bool acc) {
    switch (s.kind) {
      case StmtKind::Decl:
        check_decl(s, acc);
        return;
      case StmtKind::Assign: {
        SemType t = check_expr(*s.value);
        if (acc) {
          int local = find_local(s.target);
          if (local >= 0) {
            s.target_ref = Ref{RefKind::Local, local};
            return;
          }
          if (find_slot(s.target) >= 0)
            sem_error("cannot assign global '" + s.target + "' inside a query block", s.pos);
          sem_error("unknown variable '" + s.target + "'", s.pos);
        }
        int slot = find_slot(s.target);
        if (slot >= 0) {
          const SlotInfo& info = plan_.slots[slot];
          if (info.kind == SlotKind::GlobalAcc || info.kind == SlotKind::VertexAcc)
            sem_error("'" + s.target + "' is an accumulator", s.pos);
          if (!compatible(info.type, t) && info.kind == SlotKind::Param)
            sem_error("type mismatch assigning " + sem_type_name(t) + " to '" + s.target + "'",
                      s.pos);
        }
        slot = ensure_slot(s.target, t.kind == TypeKind::VertexSet ? SlotKind::VertexSet : SlotKind::Var,
                           t, s.pos);
        s.target_ref = Ref{RefKind::Global, slot};
        return;
      }
      case StmtKind::AccUpdate: {
        Expr& target = *s.target_expr;
        if (target.primed) sem_error("cannot write a primed accumulator", target.pos);
        check_expr(target);
        if (acc && !s.plus && target.kind == ExprKind::GlobalAcc && clause_ == Clause::Accum)
          warnings_.push_back("@@" + target.name +
                              " is assigned with '=' inside ACCUM; with several bindings the "
                              "final value depends on binding order");
        SemType t = check_expr(*s.value);
        const AccSpec& spec = *plan_.slots[target.slot].spec;
        if (!compatible(acc_input_type(spec), t))
          sem_error("type mismatch: " + acc_spec_name(spec) + " cannot take " + sem_type_name(t),
                    s.value->pos);
        if (spec.kind == AccKind::Map && known(t) && t.kind != TypeKind::MapEntry &&
            t.kind != TypeKind::Map)
          sem_error("type mismatch: " + acc_spec_name(spec) + " takes (key -> value) entries",
                    s.value->pos);
        return;
      }
      case StmtKind::Block:
        check_block(*s.block);
        return;
      case StmtKind::If:
        expect_bool(*s.cond);
        check_scoped(s.body, acc);
        check_scoped(s.else_body, acc);
        return;
      case StmtKind::While:
        expect_bool(*s.cond);
        if (s.limit) expect_int(*s.limit);
        enter_loop(acc);
        check_scoped(s.body, acc);
        leave_loop(acc);
        return;
      case StmtKind::Foreach:
        check_foreach(s, acc);
        return;
      case StmtKind::Case: {
        SemType subject;
        if (s.subject) subject = check_expr(*s.subject);
        for (auto& [cond, body] : s.branches) {
          SemType c = check_expr(*cond);
          if (s.subject) {
            if (!comparable(subject, c)) sem_error("type mismatch in CASE branch", cond->pos);
          } else if (known(c) && c.kind != TypeKind::Bool) {
            sem_error("CASE condition must be boolean", cond->pos);
          }
          check_scoped(body, acc);
        }
        check_scoped(s.else_body, acc);
        return;
      }
      case StmtKind::Break:
      case StmtKind::Continue:
        if ((acc ? acc_loops_ : top_loops_) == 0)
          sem_error(std::string(s.kind == StmtKind::Break ? "BREAK" : "CONTINUE") +
                        " outside a loop",
                    s.pos);
        return;
    }
  }

  void check_scoped(std::vector<StmtPtr>& body, bool acc) {
    if (acc) locals_.emplace_back();
    check_stmts(body, acc);
    if (acc) locals_.pop_back();
  }

  void enter_loop(bool acc) { ++(acc ? acc_loops_ : top_loops_); }
  void leave_loop(bool acc) { --(acc ? acc_loops_ : top_loops_); }

  void check_decl(Stmt& s, bool acc) {
    TypeAst& type = *s.type;
    if (type.cat == TypeAst::Cat::Acc) {
      auto spec = make_spec(type);
      if (type.capacity) {
        SemType c = check_expr(*type.capacity);
        if (known(c) && c.kind != TypeKind::Int) sem_error("heap capacity must be an integer", type.pos);
      } else if (type.acc == AccKind::Heap) {
        sem_error("HeapAccum needs a capacity", type.pos);
      }
      SemType read = acc_read_type(*spec);
      for (auto& item : s.items) {
        bool global = item.name.rfind("@@", 0) == 0;
        int slot = add_slot(item.name, global ? SlotKind::GlobalAcc : SlotKind::VertexAcc, read, item.pos);
        plan_.slots[slot].spec = spec;
        plan_.slots[slot].capacity = type.capacity.get();
        item.slot = slot;
        if (item.init) {
          SemType t = check_expr(*item.init);
          if (!compatible(acc_input_type(*spec), t))
            sem_error("type mismatch initializing " + item.name, item.init->pos);
        }
      }
      return;
    }
    SemType t = elem_type(type.base, type.pos);
    for (auto& item : s.items) {
      if (item.init) {
        SemType v = check_expr(*item.init);
        if (!compatible(t, v))
          sem_error("type mismatch: cannot initialize " + sem_type_name(t) + " '" + item.name +
                        "' with " + sem_type_name(v),
                    item.pos);
      }
      if (acc) {
        item.slot = add_local(item.name, item.pos);
      } else {
        item.slot = add_slot(item.name, SlotKind::Var, t, item.pos);
      }
    }
  }

  void check_foreach(Stmt& s, bool acc) {
    SemType elem = of(TypeKind::Unknown);
    if (s.range) {
      expect_int(*s.lo);
      expect_int(*s.hi);
      elem = of(TypeKind::Int);
    } else {
      SemType t = check_expr(*s.subject);
      if (t.kind == TypeKind::VertexSet) {
        elem = of(TypeKind::Vertex);
      } else if (setlike(t) && t.elem) {
        elem = *t.elem;
      } else if (known(t) && !setlike(t) && t.kind != TypeKind::Map) {
        sem_error("FOREACH needs a collection, got " + sem_type_name(t), s.subject->pos);
      }
    }
    if (s.vars.size() > 2 || (s.vars.size() == 2 && s.range))
      sem_error("too many loop variables", s.pos);
    if (acc) locals_.emplace_back();
    s.var_refs.clear();
    for (const auto& v : s.vars) {
      if (acc) {
        s.var_refs.push_back(Ref{RefKind::Local, add_local(v, s.pos)});
      } else {
        s.var_refs.push_back(Ref{RefKind::Global, ensure_slot(v, SlotKind::Var, s.vars.size() == 1 ? elem : of(TypeKind::Unknown), s.pos)});
      }
    }
    enter_loop(acc);
    check_scoped(s.body, acc);
    leave_loop(acc);
    if (acc) locals_.pop_back();
  }

  // ---- locals ----
  int find_local(const std::string& name) const {
    for (auto it = locals_.rbegin(); it != locals_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return f->second;
    }
    return -1;
  }

  int add_local(const std::string& name, SourcePos pos) {
    if (locals_.empty()) sem_error("local variable outside a query block", pos);
    if (locals_.back().count(name)) sem_error("'" + name + "' is already declared", pos);
    int idx = local_count_++;
    locals_.back()[name] = idx;
    return idx;
  }

  // ---- query blocks ----
  int add_block_var(BlockInfo& info, const std::string& name, SemType type) {
    info.vars.push_back(name);
    info.var_types.push_back(std::move(type));
    return static_cast<int>(info.vars.size()) - 1;
  }

  int block_var(const std::string& name) const {
    if (!block_) return -1;
    for (std::size_t i = 0; i < block_->vars.size(); ++i) {
      if (block_->vars[i] == name) return static_cast<int>(i);
    }
    return -1;
  }

  void check_block(QueryBlock& b) {
    auto info = std::make_shared<BlockInfo>();
    b.info = info;
    block_ = info.get();
    block_ast_ = &b;

    for (auto& atom : b.from) check_atom(*info, atom);

    if (b.where) {
      clause_ = Clause::Where;
      expect_bool(*b.where);
    }
    if (b.has_accum) {
      clause_ = Clause::Accum;
      begin_locals();
      check_stmts(b.accum, true);
      info->accum_locals = end_locals();
    }

    if (b.group_by.size() > b.outputs.size()) sem_error("more GROUP BY lists than outputs", b.pos);
    if (b.having.size() > b.outputs.size()) sem_error("more HAVING conditions than outputs", b.pos);
    if (b.order_by.size() > b.outputs.size()) sem_error("more ORDER BY lists than outputs", b.pos);
    if (b.limit.size() > b.outputs.size()) sem_error("more LIMIT values than outputs", b.pos);

    for (std::size_t i = 0; i < b.outputs.size(); ++i) {
      OutTable& out = b.outputs[i];
      OutputInfo oi;
      clause_ = Clause::Select;
      bool any_agg = false;
      for (auto& col : out.cols) {
        saw_aggregate_ = false;
        check_expr(*col.expr);
        any_agg = any_agg || saw_aggregate_;
        oi.columns.push_back(column_name(col, expr_text(*col.expr)));
      }
      bool has_group = i < b.group_by.size() && !b.group_by[i].empty();
      clause_ = Clause::GroupBy;
      if (i < b.group_by.size()) {
        for (auto& k : b.group_by[i]) check_expr(*k);
      }
      oi.grouped = has_group || any_agg;
      const Expr& first = *out.cols[0].expr;
      oi.vertex_set = out.cols.size() == 1 && !out.all && !has_group && out.cols[0].alias.empty() &&
                      first.kind == ExprKind::Ident && first.ref.kind == RefKind::BlockVar &&
                      info->var_types[first.ref.index].kind == TypeKind::Vertex;
      if (!out.into.empty()) {
        if (oi.vertex_set) {
          oi.into_slot = ensure_slot(out.into, SlotKind::VertexSet, of(TypeKind::VertexSet), out.pos);
        } else {
          oi.into_slot = ensure_slot(out.into, SlotKind::Table, named(TypeKind::Table, out.into), out.pos);
          table_columns_[out.into] = oi.columns;
        }
      }
      info->outputs.push_back(std::move(oi));
    }
    if (!b.target.empty()) {
      const OutputInfo& oi = info->outputs[0];
      info->target_slot =
          oi.vertex_set ? ensure_slot(b.target, SlotKind::VertexSet, of(TypeKind::VertexSet), b.pos)
                        : ensure_slot(b.target, SlotKind::Table, named(TypeKind::Table, b.target), b.pos);
      if (!oi.vertex_set) table_columns_[b.target] = oi.columns;
    }

    if (b.has_post_accum) {
      if (b.outputs.size() != 1) sem_error("POST_ACCUM needs a single output", b.pos);
      post_allowed_.clear();
      for (std::size_t c = 0; c < b.outputs[0].cols.size(); ++c) {
        const Expr& e = *b.outputs[0].cols[c].expr;
        if (e.kind == ExprKind::Ident && e.ref.kind == RefKind::BlockVar) {
          post_allowed_[e.ref.index] = static_cast<int>(c);
        }
      }
      for (auto [var, col] : post_allowed_) info->post_bindings.emplace_back(var, col);
      clause_ = Clause::PostAccum;
      begin_locals();
      check_stmts(b.post_accum, true);
      info->post_locals = end_locals();
    }

    for (std::size_t i = 0; i < b.having.size(); ++i) {
      clause_ = Clause::Having;
      output_ = static_cast<int>(i);
      expect_bool(*b.having[i]);
    }
    for (std::size_t i = 0; i < b.order_by.size(); ++i) {
      clause_ = Clause::OrderBy;
      output_ = static_cast<int>(i);
      for (auto& item : b.order_by[i]) {
        SemType t = check_expr(*item.expr);
        if (known(t) && (setlike(t) || t.kind == TypeKind::Map || t.kind == TypeKind::Table))
          sem_error("ORDER BY needs an ordered type, got " + sem_type_name(t), item.expr->pos);
      }
    }
    for (auto& l : b.limit) {
      clause_ = Clause::Limit;
      expect_int(*l);
    }
    clause_ = Clause::Top;
    output_ = -1;
    block_ = nullptr;
    block_ast_ = nullptr;
  }

  void begin_locals() {
    locals_.clear();
    locals_.emplace_back();
    local_count_ = 0;
  }

  int end_locals() {
    locals_.clear();
    return local_count_;
  }

  void check_atom(BlockInfo& info, Atom& atom) {
    auto& bound = info.bound_slots.emplace_back();
    auto& concat = info.path_concat.emplace_back();
    if (atom.relational) {
      int slot = find_slot(atom.name);
      if (slot >= 0 && plan_.slots[slot].kind == SlotKind::Table) {
        atom.table_slot = slot;
      } else if (env_.tables.count(atom.name)) {
        atom.table_slot = -1;
      } else {
        sem_error("unknown table '" + atom.name + "'", atom.pos);
      }
      if (block_var(atom.var) >= 0) sem_error("'" + atom.var + "' is already bound", atom.pos);
      add_block_var(info, atom.var, named(TypeKind::Row, atom.name));
      return;
    }
    const GraphDef* graph = nullptr;
    std::string gname = atom.name.empty() ? plan_.graph : atom.name;
    if (!gname.empty()) {
      graph = cat().find_graph(gname);
      if (!graph) sem_error("unknown graph '" + gname + "'", atom.pos);
    }
    for (auto& path : atom.paths) {
      auto& path_bound = bound.emplace_back();
      for (std::size_t i = 0; i < path.nodes.size(); ++i) {
        path_bound.push_back(check_node(info, path.nodes[i], graph));
        if (i < path.hops.size()) check_hop(info, path.hops[i]);
      }
      std::shared_ptr<const DarpeAutomaton> whole;
      bool variable = std::any_of(path.hops.begin(), path.hops.end(),
                                  [](const PatternHop& h) { return h.automaton->fixed_length < 0; });
      if (variable && path.hops.size() > 1) {
        Darpe cat_darpe;
        cat_darpe.kind = Darpe::Kind::Concat;
        for (const auto& h : path.hops) cat_darpe.kids.push_back(clone_darpe(*h.darpe));
        whole = std::make_shared<const DarpeAutomaton>(compile_darpe(cat_darpe, cat()));
      }
      concat.push_back(std::move(whole));
    }
  }

  int check_node(BlockInfo& info, PatternNode& node, const GraphDef* graph) {
    VTest& test = node.test;
    test.type_ids.clear();
    test.set_slot = -1;
    std::string type_name;
    if (!test.wildcard) {
      for (const auto& name : test.names) {
        int slot = find_slot(name);
        if (slot >= 0 && plan_.slots[slot].kind == SlotKind::VertexSet) {
          if (test.names.size() != 1)
            sem_error("a vertex set cannot appear in a disjunctive test", node.pos);
          test.set_slot = slot;
          continue;
        }
        const VertexTypeDef* vt = cat().find_vertex_type(name);
        if (!vt) sem_error("unknown vertex type or set '" + name + "'", node.pos);
        if (graph && std::find(graph->vertex_types.begin(), graph->vertex_types.end(), vt->id) ==
                         graph->vertex_types.end())
          sem_error("vertex type '" + name + "' is not in graph '" + graph->name + "'", node.pos);
        test.type_ids.push_back(vt->id);
      }
      if (test.type_ids.size() == 1) type_name = test.names[0];
    }
    if (node.var.empty()) return -1;
    if (block_var(node.var) >= 0) {
      if (info.var_types[block_var(node.var)].kind != TypeKind::Vertex)
        sem_error("'" + node.var + "' is not a vertex variable", node.pos);
      return -1;
    }
    int slot = find_slot(node.var);
    if (slot >= 0) {
      const SemType& t = plan_.slots[slot].type;
      if (known(t) && t.kind != TypeKind::Vertex)
        sem_error("'" + node.var + "' is bound to a " + sem_type_name(t) + ", not a vertex", node.pos);
      return slot;
    }
    add_block_var(info, node.var, named(TypeKind::Vertex, type_name));
    return -1;
  }

  void check_hop(BlockInfo& info, PatternHop& hop) {
    hop.automaton = std::make_shared<const DarpeAutomaton>(compile_darpe(*hop.darpe, cat()));
    hop.single_hop = hop.automaton->single_hop();
    if (hop.var.empty()) return;
    if (!hop.single_hop)
      sem_error("edge variable '" + hop.var + "' needs a single-hop pattern", hop.pos);
    if (block_var(hop.var) >= 0 || find_slot(hop.var) >= 0)
      sem_error("'" + hop.var + "' is already bound", hop.pos);
    std::string type_name;
    if (hop.darpe->kind == Darpe::Kind::Symbol && hop.darpe->edge_type != "_")
      type_name = hop.darpe->edge_type;
    add_block_var(info, hop.var, named(TypeKind::Edge, type_name));
  }

  // ---- expressions ----
  void expect_bool(Expr& e) {
    SemType t = check_expr(e);
    if (known(t) && t.kind != TypeKind::Bool)
      sem_error("type mismatch: expected a boolean, got " + sem_type_name(t), e.pos);
  }

  void expect_int(Expr& e) {
    SemType t = check_expr(e);
    if (known(t) && t.kind != TypeKind::Int)
      sem_error("type mismatch: expected an integer, got " + sem_type_name(t), e.pos);
  }

  SemType check_expr(Expr& e) {
    e.type = infer(e);
    return e.type;
  }

  bool aggregates_allowed() const {
    return clause_ == Clause::Select || clause_ == Clause::Having || clause_ == Clause::OrderBy;
  }

  void check_primed(const Expr& e) {
    if (e.primed && top_loops_ == 0)
      sem_error("primed accumulator read outside a loop", e.pos);
  }

  SemType resolve_ident(Expr& e) {
    if (clause_ == Clause::Accum || clause_ == Clause::PostAccum) {
      int local = find_local(e.name);
      if (local >= 0) {
        e.ref = Ref{RefKind::Local, local};
        return of(TypeKind::Unknown);
      }
    }
    if (clause_ != Clause::Top && clause_ != Clause::Limit) {
      int var = block_var(e.name);
      if (var >= 0) {
        if (clause_ == Clause::PostAccum && !post_allowed_.count(var))
          sem_error("POST_ACCUM can only use variables selected as bare columns, not '" + e.name + "'",
                    e.pos);
        e.ref = Ref{RefKind::BlockVar, var};
        saw_block_var_ = true;
        return block_->var_types[var];
      }
      if ((clause_ == Clause::Having || clause_ == Clause::OrderBy) && output_ >= 0) {
        const auto& cols = block_->outputs[output_].columns;
        const auto& out = block_ast_->outputs[output_];
        for (std::size_t c = 0; c < cols.size(); ++c) {
          if (cols[c] == e.name) {
            e.ref = Ref{RefKind::Alias, static_cast<int>(c)};
            return out.cols[c].expr->type;
          }
        }
      }
    }
    int slot = find_slot(e.name);
    if (slot >= 0) {
      const SlotInfo& s = plan_.slots[slot];
      if (s.kind == SlotKind::GlobalAcc || s.kind == SlotKind::VertexAcc)
        sem_error("'" + e.name + "' is an accumulator", e.pos);
      e.ref = Ref{RefKind::Global, slot};
      return s.type;
    }
    sem_error("unknown name '" + e.name + "'", e.pos);
  }

  SemType attr_type(const SemType& base, const std::string& member, SourcePos pos) {
    if (member == "type" && (base.kind == TypeKind::Vertex || base.kind == TypeKind::Edge))
      return of(TypeKind::String);
    if (base.kind == TypeKind::Vertex) {
      if (base.name.empty()) return of(TypeKind::Unknown);
      const VertexTypeDef* vt = cat().find_vertex_type(base.name);
      int idx = vt ? vt->attribute_index(member) : -1;
      if (idx < 0) sem_error("vertex type '" + base.name + "' has no attribute '" + member + "'", pos);
      return sem_type_of(vt->attributes[idx].type);
    }
    if (base.kind == TypeKind::Edge) {
      if (base.name.empty()) return of(TypeKind::Unknown);
      const EdgeTypeDef* et = cat().find_edge_type(base.name);
      int idx = et ? et->attribute_index(member) : -1;
      if (idx < 0) sem_error("edge type '" + base.name + "' has no attribute '" + member + "'", pos);
      return sem_type_of(et->attributes[idx].type);
    }
    if (base.kind == TypeKind::Row) {
      auto it = table_columns_.find(base.name);
      if (it != table_columns_.end() &&
          std::find(it->second.begin(), it->second.end(), member) == it->second.end())
        sem_error("table '" + base.name + "' has no column '" + member + "'", pos);
      return of(TypeKind::Unknown);
    }
    if (known(base) && base.kind != TypeKind::Tuple)
      sem_error("cannot read attribute '" + member + "' of " + sem_type_name(base), pos);
    return of(TypeKind::Unknown);
  }

  SemType infer(Expr& e) {
    switch (e.kind) {
      case ExprKind::Literal:
        return literal_type(e.literal);
      case ExprKind::Ident:
        return resolve_ident(e);
      case ExprKind::Attr: {
        SemType base = check_expr(*e.args[0]);
        return attr_type(base, e.member, e.pos);
      }
      case ExprKind::GlobalAcc: {
        int slot = find_slot("@@" + e.name);
        if (slot < 0 || plan_.slots[slot].kind != SlotKind::GlobalAcc)
          sem_error("unknown accumulator '@@" + e.name + "'", e.pos);
        check_primed(e);
        e.slot = slot;
        return plan_.slots[slot].type;
      }
      case ExprKind::VertexAcc: {
        SemType base = check_expr(*e.args[0]);
        if (known(base) && base.kind != TypeKind::Vertex)
          sem_error("vertex accumulator '@" + e.member + "' read on " + sem_type_name(base), e.pos);
        int slot = find_slot("@" + e.member);
        if (slot < 0 || plan_.slots[slot].kind != SlotKind::VertexAcc)
          sem_error("unknown accumulator '@" + e.member + "'", e.pos);
        check_primed(e);
        e.slot = slot;
        return plan_.slots[slot].type;
      }
      case ExprKind::Unary: {
        SemType t = check_expr(*e.args[0]);
        if (e.op == Op::Not) {
          if (known(t) && t.kind != TypeKind::Bool) sem_error("NOT needs a boolean", e.pos);
          return of(TypeKind::Bool);
        }
        if (known(t) && !numeric(t)) sem_error("unary minus needs a number", e.pos);
        return t;
      }
      case ExprKind::Binary:
        return infer_binary(e);
      case ExprKind::Between: {
        SemType a = check_expr(*e.args[0]);
        SemType lo = check_expr(*e.args[1]);
        SemType hi = check_expr(*e.args[2]);
        if (!comparable(a, lo) || !comparable(a, hi)) sem_error("type mismatch in BETWEEN", e.pos);
        return of(TypeKind::Bool);
      }
      case ExprKind::In: {
        check_expr(*e.args[0]);
        SemType c = check_expr(*e.args[1]);
        if (known(c) && !setlike(c) && c.kind != TypeKind::Map && c.kind != TypeKind::Tuple)
          sem_error("IN needs a collection, got " + sem_type_name(c), e.pos);
        return of(TypeKind::Bool);
      }
      case ExprKind::Like: {
        SemType a = check_expr(*e.args[0]);
        SemType p = check_expr(*e.args[1]);
        if ((known(a) && a.kind != TypeKind::String) || (known(p) && p.kind != TypeKind::String))
          sem_error("LIKE needs strings", e.pos);
        return of(TypeKind::Bool);
      }
      case ExprKind::IsNull:
        check_expr(*e.args[0]);
        return of(TypeKind::Bool);
      case ExprKind::Call:
        return infer_call(e);
      case ExprKind::Method:
        return infer_method(e);
      case ExprKind::Case:
      case ExprKind::CaseValue: {
        std::size_t i = 0;
        SemType subject;
        if (e.kind == ExprKind::CaseValue) subject = check_expr(*e.args[i++]);
        std::size_t end = e.args.size() - (e.has_else ? 1 : 0);
        SemType result = of(TypeKind::Unknown);
        for (; i < end; i += 2) {
          SemType c = check_expr(*e.args[i]);
          if (e.kind == ExprKind::Case) {
            if (known(c) && c.kind != TypeKind::Bool) sem_error("CASE condition must be boolean", e.args[i]->pos);
          } else if (!comparable(subject, c)) {
            sem_error("type mismatch in CASE", e.args[i]->pos);
          }
          SemType v = check_expr(*e.args[i + 1]);
          if (!known(result)) result = v;
        }
        if (e.has_else) {
          SemType v = check_expr(*e.args.back());
          if (!known(result)) result = v;
        }
        return result;
      }
      case ExprKind::Tuple:
        for (auto& a : e.args) check_expr(*a);
        return of(TypeKind::Tuple);
      case ExprKind::List: {
        SemType elem = of(TypeKind::Unknown);
        for (auto& a : e.args) {
          SemType t = check_expr(*a);
          if (!known(elem)) elem = t;
        }
        return with_elem(TypeKind::List, elem);
      }
      case ExprKind::MapEntry:
        check_expr(*e.args[0]);
        check_expr(*e.args[1]);
        return of(TypeKind::MapEntry);
      case ExprKind::SeedSet: {
        e.type_ids.clear();
        for (auto& a : e.args) {
          const VertexTypeDef* vt = cat().find_vertex_type(a->name);
          if (!vt) sem_error("unknown vertex type '" + a->name + "'", a->pos);
          e.type_ids.push_back(vt->id);
        }
        return of(TypeKind::VertexSet);
      }
      case ExprKind::SetLit: {
        bool all_vertices = !e.args.empty();
        SemType elem = of(TypeKind::Unknown);
        for (auto& a : e.args) {
          SemType t = check_expr(*a);
          if (t.kind != TypeKind::Vertex) all_vertices = false;
          if (!known(elem)) elem = t;
        }
        if (all_vertices) return of(TypeKind::VertexSet);
        return with_elem(TypeKind::Set, elem);
      }
      case ExprKind::Index: {
        SemType base = check_expr(*e.args[0]);
        check_expr(*e.args[1]);
        if (base.kind == TypeKind::Map && base.value) return *base.value;
        if (base.kind == TypeKind::List && base.elem) return *base.elem;
        return of(TypeKind::Unknown);
      }
    }
    return of(TypeKind::Unknown);
  }

  SemType infer_binary(Expr& e) {
    SemType a = check_expr(*e.args[0]);
    SemType b = check_expr(*e.args[1]);
    auto mismatch = [&]() {
      sem_error("type mismatch: " + sem_type_name(a) + " " + std::string(op_text(e.op)) + " " +
                    sem_type_name(b),
                e.pos);
    };
    switch (e.op) {
      case Op::Add:
        if (a.kind == TypeKind::String || b.kind == TypeKind::String) {
          if (known(a) && known(b) && a.kind != b.kind) mismatch();
          return of(TypeKind::String);
        }
        [[fallthrough]];
      case Op::Sub:
        if (e.op == Op::Sub && setlike(a) && setlike(b)) {
          e.op = Op::Minus;
          return a.kind == TypeKind::VertexSet && b.kind == TypeKind::VertexSet ? of(TypeKind::VertexSet) : a;
        }
        [[fallthrough]];
      case Op::Mul:
      case Op::Div:
      case Op::Mod:
        if ((known(a) && !numeric(a)) || (known(b) && !numeric(b))) mismatch();
        if (e.op == Op::Mod) return of(TypeKind::Int);
        if (a.kind == TypeKind::Int && b.kind == TypeKind::Int) return of(TypeKind::Int);
        if (known(a) && known(b)) return of(TypeKind::Double);
        return of(TypeKind::Unknown);
      case Op::BitAnd:
      case Op::BitOr:
        if ((known(a) && a.kind != TypeKind::Int) || (known(b) && b.kind != TypeKind::Int)) mismatch();
        return of(TypeKind::Int);
      case Op::Union:
      case Op::Intersect:
      case Op::Minus:
        if ((known(a) && !setlike(a)) || (known(b) && !setlike(b))) mismatch();
        if (a.kind == TypeKind::VertexSet && b.kind == TypeKind::VertexSet) return of(TypeKind::VertexSet);
        return known(a) ? a : b;
      case Op::Eq:
      case Op::Ne:
      case Op::Lt:
      case Op::Le:
      case Op::Gt:
      case Op::Ge:
        if (!comparable(a, b)) mismatch();
        return of(TypeKind::Bool);
      case Op::And:
      case Op::Or:
        if ((known(a) && a.kind != TypeKind::Bool) || (known(b) && b.kind != TypeKind::Bool)) mismatch();
        return of(TypeKind::Bool);
      case Op::Contains:
        if (a.kind == TypeKind::String && known(b) && b.kind != TypeKind::String) mismatch();
        return of(TypeKind::Bool);
      default:
        return of(TypeKind::Unknown);
    }
  }

  SemType infer_call(Expr& e) {
    static const std::unordered_map<std::string, Builtin> kBuiltins = {
        {"count", Builtin::Count},     {"sum", Builtin::Sum},     {"min", Builtin::Min},
        {"max", Builtin::Max},         {"avg", Builtin::Avg},     {"log", Builtin::Log},
        {"abs", Builtin::Abs},         {"sqrt", Builtin::Sqrt},   {"pow", Builtin::Pow},
        {"floor", Builtin::Floor},     {"ceil", Builtin::Ceil},   {"to_string", Builtin::ToString},
        {"to_datetime", Builtin::ToDatetime}, {"year", Builtin::Year}, {"getvid", Builtin::GetVid},
        {"size", Builtin::Size},       {"outdegree", Builtin::Outdegree}};
    auto it = kBuiltins.find(lower(e.name));
    if (it == kBuiltins.end()) sem_error("unknown function '" + e.name + "'", e.pos);
    e.builtin = it->second;
    auto arity = [&](std::size_t lo, std::size_t hi) {
      if (e.args.size() < lo || e.args.size() > hi)
        sem_error("wrong number of arguments to " + e.name, e.pos);
    };
    switch (e.builtin) {
      case Builtin::Count:
      case Builtin::Sum:
      case Builtin::Min:
      case Builtin::Max:
      case Builtin::Avg: {
        arity(1, 1);
        bool outer_saw = saw_block_var_;
        saw_block_var_ = false;
        bool outer_in_agg = in_aggregate_;
        in_aggregate_ = aggregates_allowed();
        SemType t = check_expr(*e.args[0]);
        bool refs_block = saw_block_var_;
        saw_block_var_ = outer_saw || refs_block;
        in_aggregate_ = outer_in_agg;
        if (refs_block && aggregates_allowed() && !setlike(t) && t.kind != TypeKind::Map) {
          if (in_aggregate_) sem_error("nested aggregate", e.pos);
          e.aggregate = true;
          saw_aggregate_ = true;
        } else if (known(t) && !setlike(t) && t.kind != TypeKind::Map) {
          sem_error(e.name + " needs a collection here, got " + sem_type_name(t), e.pos);
        }
        if (e.builtin == Builtin::Count) return of(TypeKind::Int);
        if (e.builtin == Builtin::Avg) return of(TypeKind::Double);
        if (e.aggregate) {
          if (e.builtin == Builtin::Sum && known(t) && !numeric(t)) sem_error("sum needs numbers", e.pos);
          return t;
        }
        return t.elem ? *t.elem : of(TypeKind::Unknown);
      }
      case Builtin::Log:
      case Builtin::Sqrt:
        arity(1, 1);
        expect_number(*e.args[0]);
        return of(TypeKind::Double);
      case Builtin::Pow:
        arity(2, 2);
        expect_number(*e.args[0]);
        expect_number(*e.args[1]);
        return of(TypeKind::Double);
      case Builtin::Abs: {
        arity(1, 1);
        SemType t = expect_number(*e.args[0]);
        return t;
      }
      case Builtin::Floor:
      case Builtin::Ceil:
        arity(1, 1);
        expect_number(*e.args[0]);
        return of(TypeKind::Int);
      case Builtin::ToString:
        arity(1, 1);
        check_expr(*e.args[0]);
        return of(TypeKind::String);
      case Builtin::ToDatetime: {
        arity(1, 1);
        SemType t = check_expr(*e.args[0]);
        if (known(t) && t.kind != TypeKind::String) sem_error("to_datetime needs a string", e.pos);
        return of(TypeKind::Datetime);
      }
      case Builtin::Year: {
        arity(1, 1);
        SemType t = check_expr(*e.args[0]);
        if (known(t) && t.kind != TypeKind::Datetime) sem_error("year needs a datetime", e.pos);
        return of(TypeKind::Int);
      }
      case Builtin::GetVid: {
        arity(1, 1);
        SemType t = check_expr(*e.args[0]);
        if (known(t) && t.kind != TypeKind::Vertex) sem_error("getvid needs a vertex", e.pos);
        return of(TypeKind::Int);
      }
      case Builtin::Size:
        arity(1, 1);
        check_expr(*e.args[0]);
        return of(TypeKind::Int);
      case Builtin::Outdegree: {
        arity(1, 1 + 64);
        SemType t = check_expr(*e.args[0]);
        if (known(t) && t.kind != TypeKind::Vertex) sem_error("outdegree needs a vertex", e.pos);
        edge_filter(e, 1);
        return of(TypeKind::Int);
      }
      default:
        return of(TypeKind::Unknown);
    }
  }

  SemType expect_number(Expr& e) {
    SemType t = check_expr(e);
    if (known(t) && !numeric(t)) sem_error("type mismatch: expected a number, got " + sem_type_name(t), e.pos);
    return t;
  }

  // Edge type names given as string literals from args[from] on.
  void edge_filter(Expr& e, std::size_t from) {
    e.type_ids.clear();
    for (std::size_t i = from; i < e.args.size(); ++i) {
      const Expr& a = *e.args[i];
      if (a.kind != ExprKind::Literal || !a.literal.is_string())
        sem_error("outdegree filters are edge type names in quotes", a.pos);
      const EdgeTypeDef* et = cat().find_edge_type(a.literal.as_string());
      if (!et) sem_error("unknown edge type '" + a.literal.as_string() + "'", a.pos);
      e.type_ids.push_back(et->id);
    }
  }

  SemType infer_method(Expr& e) {
    SemType base = check_expr(*e.args[0]);
    std::string m = lower(e.member);
    if (m == "outdegree") {
      if (known(base) && base.kind != TypeKind::Vertex) sem_error("outdegree() needs a vertex", e.pos);
      e.builtin = Builtin::Outdegree;
      edge_filter(e, 1);
      return of(TypeKind::Int);
    }
    if (m == "size") {
      if (e.args.size() != 1) sem_error("size() takes no arguments", e.pos);
      e.builtin = Builtin::Size;
      return of(TypeKind::Int);
    }
    if (m == "contains") {
      if (e.args.size() != 2) sem_error("contains() takes one argument", e.pos);
      check_expr(*e.args[1]);
      e.builtin = Builtin::None;
      return of(TypeKind::Bool);
    }
    sem_error("unknown method '" + e.member + "'", e.pos);
  }

  const CheckEnv& env_;
  QueryPlan& plan_;
  std::vector<std::string>& warnings_;
  std::unordered_map<std::string, int> slot_index_;
  std::map<std::string, std::vector<std::string>> table_columns_;

  BlockInfo* block_ = nullptr;
  QueryBlock* block_ast_ = nullptr;
  Clause clause_ = Clause::Top;
  int output_ = -1;
  std::map<int, int> post_allowed_;
  std::vector<std::map<std::string, int>> locals_;
  int local_count_ = 0;
  int top_loops_ = 0;
  int acc_loops_ = 0;
  bool saw_block_var_ = false;
  bool saw_aggregate_ = false;
  bool in_aggregate_ = false;
};

}  // namespace

int QueryPlan::find_slot(std::string_view name) const {
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

SemType sem_type_of(const ElemType& t) {
  switch (t.kind) {
    case ScalarKind::Int:
    case ScalarKind::UInt:
      return of(TypeKind::Int);
    case ScalarKind::Float:
    case ScalarKind::Double:
      return of(TypeKind::Double);
    case ScalarKind::String:
      return of(TypeKind::String);
    case ScalarKind::Bool:
      return of(TypeKind::Bool);
    case ScalarKind::Datetime:
      return of(TypeKind::Datetime);
    case ScalarKind::Vertex:
      return named(TypeKind::Vertex, t.type_name);
    case ScalarKind::Edge:
      return named(TypeKind::Edge, t.type_name);
    case ScalarKind::Tuple:
      return of(TypeKind::Tuple);
  }
  return of(TypeKind::Unknown);
}

SemType sem_type_of(DataType t) {
  switch (t) {
    case DataType::Int:
    case DataType::UInt:
      return of(TypeKind::Int);
    case DataType::Float:
    case DataType::Double:
      return of(TypeKind::Double);
    case DataType::String:
      return of(TypeKind::String);
    case DataType::Bool:
      return of(TypeKind::Bool);
    case DataType::Datetime:
      return of(TypeKind::Datetime);
  }
  return of(TypeKind::Unknown);
}

CheckedQuery check_query(std::unique_ptr<Query> q, const CheckEnv& env) {
  if (!env.catalog) fail(ErrorKind::Semantic, "no catalog loaded");
  auto plan = std::make_shared<QueryPlan>();
  CheckedQuery out;
  Checker(env, *plan, out.warnings).run(*q);
  out.query = std::shared_ptr<Query>(std::move(q));
  out.plan = std::move(plan);
  return out;
}

}  // namespace gsql
