#include "gsql/printer.hpp"

#include <sstream>

#include "json.hpp"

namespace gsql {

namespace {

using json = nlohmann::ordered_json;

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    switch (c) {
      case '\'':
        out += "''";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        out += c;
    }
  }
  return out + "'";
}

std::string literal_text(const Value& v) {
  if (v.is_null()) return "NULL";
  if (v.is_bool()) return v.as_bool() ? "TRUE" : "FALSE";
  if (v.is_int()) return std::to_string(v.as_int());
  if (v.is_double()) {
    std::string s = format_double(v.as_double());
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
  }
  if (v.is_string()) return quote(v.as_string());
  if (v.is_datetime()) return "to_datetime(" + quote(format_datetime(v.as_datetime())) + ")";
  return to_debug_string(v);
}

bool is_postfix_safe(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Literal:
      return !(e.literal.is_int() && e.literal.as_int() < 0) &&
             !(e.literal.is_double() && e.literal.as_double() < 0);
    case ExprKind::Ident:
    case ExprKind::Attr:
    case ExprKind::GlobalAcc:
    case ExprKind::VertexAcc:
    case ExprKind::Call:
    case ExprKind::Method:
    case ExprKind::Case:
    case ExprKind::CaseValue:
    case ExprKind::Tuple:
    case ExprKind::List:
    case ExprKind::MapEntry:
    case ExprKind::SeedSet:
    case ExprKind::SetLit:
    case ExprKind::Index:
      return true;
    default:
      return false;
  }
}

std::string operand(const Expr& e) {
  std::string s = print_expr(e);
  return is_postfix_safe(e) ? s : "(" + s + ")";
}

std::string join_exprs(const std::vector<ExprPtr>& xs, std::size_t from = 0) {
  std::string out;
  for (std::size_t i = from; i < xs.size(); ++i) {
    if (i > from) out += ", ";
    out += print_expr(*xs[i]);
  }
  return out;
}

std::string elem_text(const ElemType& t) {
  if (t.kind == ScalarKind::Vertex) return t.type_name.empty() ? "VERTEX" : "VERTEX<" + t.type_name + ">";
  if (t.kind == ScalarKind::Edge) return t.type_name.empty() ? "EDGE" : "EDGE<" + t.type_name + ">";
  return elem_type_name(t);
}

enum class Mode { Top, Acc };

class StmtPrinter {
 public:
  std::string list(const std::vector<StmtPtr>& stmts, Mode mode, int indent) {
    std::string out;
    for (std::size_t i = 0; i < stmts.size(); ++i) {
      if (mode == Mode::Top) {
        out += pad(indent) + stmt(*stmts[i], mode, indent) + ";\n";
      } else {
        if (i) out += ",\n" + pad(indent);
        out += stmt(*stmts[i], mode, indent);
      }
    }
    return out;
  }

  std::string stmt(const Stmt& s, Mode mode, int indent) {
    switch (s.kind) {
      case StmtKind::Decl: {
        std::string out = print_type(*s.type) + " ";
        for (std::size_t i = 0; i < s.items.size(); ++i) {
          if (i) out += ", ";
          out += s.items[i].name;
          if (s.items[i].init) out += " = " + print_expr(*s.items[i].init);
        }
        return out;
      }
      case StmtKind::Assign:
        return s.target + " = " + print_expr(*s.value);
      case StmtKind::AccUpdate:
        return print_expr(*s.target_expr) + (s.plus ? " += " : " = ") + print_expr(*s.value);
      case StmtKind::Block:
        return block(*s.block, indent);
      case StmtKind::If: {
        std::string out = "IF " + print_expr(*s.cond) + " THEN" + body(s.body, mode, indent);
        if (s.has_else) out += "ELSE" + body(s.else_body, mode, indent);
        return out + "END";
      }
      case StmtKind::While: {
        std::string out = "WHILE " + print_expr(*s.cond);
        if (s.limit) out += " LIMIT " + print_expr(*s.limit);
        return out + " DO" + body(s.body, mode, indent) + "END";
      }
      case StmtKind::Foreach: {
        std::string out = "FOREACH ";
        if (s.vars.size() == 1) {
          out += s.vars[0];
        } else {
          out += "(";
          for (std::size_t i = 0; i < s.vars.size(); ++i) out += (i ? ", " : "") + s.vars[i];
          out += ")";
        }
        out += " IN ";
        if (s.range) {
          out += "RANGE(" + print_expr(*s.lo) + ", " + print_expr(*s.hi) + ")";
        } else {
          out += print_expr(*s.subject);
        }
        return out + " DO" + body(s.body, mode, indent) + "END";
      }
      case StmtKind::Case: {
        std::string out = "CASE";
        if (s.subject) out += " " + print_expr(*s.subject);
        for (const auto& [cond, stmts] : s.branches) {
          out += "\n" + pad(indent) + "WHEN " + print_expr(*cond) + " THEN" + body(stmts, mode, indent);
        }
        if (s.has_else) out += "ELSE" + body(s.else_body, mode, indent);
        return out + "END";
      }
      case StmtKind::Break:
        return "BREAK";
      case StmtKind::Continue:
        return "CONTINUE";
    }
    return "";
  }

  std::string block(const QueryBlock& b, int indent) {
    std::string in = "\n" + pad(indent + 2);
    std::string out;
    if (!b.target.empty()) out += b.target + " = ";
    out += "SELECT ";
    for (std::size_t i = 0; i < b.outputs.size(); ++i) {
      const OutTable& o = b.outputs[i];
      if (i) out += ";" + in + "       ";
      if (o.distinct) out += "DISTINCT ";
      if (o.all) out += "ALL ";
      for (std::size_t c = 0; c < o.cols.size(); ++c) {
        if (c) out += ", ";
        out += print_expr(*o.cols[c].expr);
        if (!o.cols[c].alias.empty()) out += " AS " + o.cols[c].alias;
      }
      if (!o.into.empty()) out += " INTO " + o.into;
    }
    out += in + "FROM ";
    for (std::size_t i = 0; i < b.from.size(); ++i) {
      const Atom& a = b.from[i];
      if (i) out += "," + in + "     ";
      if (a.relational) {
        out += a.name + " AS " + a.var;
        continue;
      }
      if (!a.name.empty()) out += a.name + " AS ";
      for (std::size_t p = 0; p < a.paths.size(); ++p) {
        if (p) out += ", ";
        out += path(a.paths[p]);
      }
    }
    if (b.where) out += in + "WHERE " + print_expr(*b.where);
    if (b.has_accum) out += in + "ACCUM " + list(b.accum, Mode::Acc, indent + 8);
    if (b.has_post_accum) out += in + "POST_ACCUM " + list(b.post_accum, Mode::Acc, indent + 13);
    if (!b.group_by.empty()) {
      out += in + "GROUP BY ";
      for (std::size_t i = 0; i < b.group_by.size(); ++i) {
        if (i) out += "; ";
        out += join_exprs(b.group_by[i]);
      }
    }
    if (!b.having.empty()) {
      out += in + "HAVING ";
      for (std::size_t i = 0; i < b.having.size(); ++i) out += (i ? "; " : "") + print_expr(*b.having[i]);
    }
    if (!b.order_by.empty()) {
      out += in + "ORDER BY ";
      for (std::size_t i = 0; i < b.order_by.size(); ++i) {
        if (i) out += "; ";
        for (std::size_t k = 0; k < b.order_by[i].size(); ++k) {
          const OrderItem& item = b.order_by[i][k];
          if (k) out += ", ";
          out += print_expr(*item.expr);
          if (item.explicit_dir) out += item.descending ? " DESC" : " ASC";
        }
      }
    }
    if (!b.limit.empty()) {
      out += in + "LIMIT ";
      for (std::size_t i = 0; i < b.limit.size(); ++i) out += (i ? "; " : "") + print_expr(*b.limit[i]);
    }
    return out;
  }

 private:
  static std::string pad(int n) { return std::string(static_cast<std::size_t>(n), ' '); }

  std::string body(const std::vector<StmtPtr>& stmts, Mode mode, int indent) {
    if (mode == Mode::Top) return "\n" + list(stmts, mode, indent + 2) + pad(indent);
    return " " + list(stmts, mode, indent + 2) + " ";
  }

  static std::string node(const PatternNode& n) {
    std::string out;
    if (n.test.wildcard) {
      out = "_";
    } else {
      for (std::size_t i = 0; i < n.test.names.size(); ++i) out += (i ? "|" : "") + n.test.names[i];
    }
    if (!n.var.empty()) out += ":" + n.var;
    return out;
  }

  static std::string path(const PathPattern& p) {
    std::string out = node(p.nodes[0]);
    for (std::size_t i = 0; i < p.hops.size(); ++i) {
      out += " -(" + print_darpe(*p.hops[i].darpe);
      if (!p.hops[i].var.empty()) out += ":" + p.hops[i].var;
      out += ")- " + node(p.nodes[i + 1]);
    }
    return out;
  }
};

// ---- JSON ----

json type_json(const TypeAst& t);

json expr_json(const Expr* e) {
  if (!e) return nullptr;
  static const char* kinds[] = {"literal", "ident",  "attr",     "global_acc", "vertex_acc",
                                "unary",   "binary", "between",  "in",         "like",
                                "is_null", "call",   "method",   "case",       "case_value",
                                "tuple",   "list",   "map_entry", "seed_set",  "set_lit",
                                "index"};
  json j = json::object();
  j["kind"] = kinds[static_cast<int>(e->kind)];
  if (e->kind == ExprKind::Literal) {
    const Value& v = e->literal;
    if (v.is_null()) {
      j["value"] = nullptr;
    } else if (v.is_bool()) {
      j["value"] = v.as_bool();
    } else if (v.is_int()) {
      j["value"] = v.as_int();
    } else if (v.is_double()) {
      j["value"] = v.as_double();
      j["float"] = true;
    } else {
      j["value"] = to_debug_string(v);
    }
  }
  if (!e->name.empty()) j["name"] = e->name;
  if (!e->member.empty()) j["member"] = e->member;
  if (e->op != Op::None) j["op"] = std::string(op_text(e->op));
  if (e->primed) j["primed"] = true;
  if (e->negated) j["negated"] = true;
  if (e->has_else) j["has_else"] = true;
  if (!e->args.empty()) {
    json args = json::array();
    for (const auto& a : e->args) args.push_back(expr_json(a.get()));
    j["args"] = std::move(args);
  }
  return j;
}

json darpe_json(const Darpe& d) {
  json j = json::object();
  switch (d.kind) {
    case Darpe::Kind::Symbol:
      j["symbol"] = d.edge_type;
      if (d.dir != Adorn::None) j["dir"] = d.dir == Adorn::Forward ? ">" : "<";
      return j;
    case Darpe::Kind::Concat:
      j["kind"] = "concat";
      break;
    case Darpe::Kind::Alt:
      j["kind"] = "alt";
      break;
    case Darpe::Kind::Star:
      j["kind"] = "star";
      if (d.has_bounds) {
        j["lo"] = d.lo ? json(*d.lo) : json(nullptr);
        j["hi"] = d.hi ? json(*d.hi) : json(nullptr);
      }
      break;
  }
  json kids = json::array();
  for (const auto& k : d.kids) kids.push_back(darpe_json(*k));
  j["kids"] = std::move(kids);
  return j;
}

json type_json(const TypeAst& t) {
  json j = json::object();
  static const char* cats[] = {"base", "acc", "set", "bag", "map"};
  j["cat"] = cats[static_cast<int>(t.cat)];
  if (t.cat == TypeAst::Cat::Base) {
    j["base"] = elem_type_name(t.base);
    return j;
  }
  if (t.cat == TypeAst::Cat::Acc) j["acc"] = acc_kind_name(t.acc);
  json params = json::array();
  for (const auto& p : t.params) params.push_back(type_json(p));
  j["params"] = std::move(params);
  if (!t.field_names.empty()) j["fields"] = t.field_names;
  if (t.capacity) j["capacity"] = expr_json(t.capacity.get());
  if (!t.heap_order.empty()) {
    json order = json::array();
    for (const auto& [f, desc] : t.heap_order) order.push_back(json::array({f, desc}));
    j["order"] = std::move(order);
  }
  if (!t.dims.empty()) {
    json dims = json::array();
    for (const auto& d : t.dims) dims.push_back(expr_json(d.get()));
    j["dims"] = std::move(dims);
  }
  return j;
}

json stmts_json(const std::vector<StmtPtr>& stmts);

json block_json(const QueryBlock& b) {
  json j = json::object();
  if (!b.target.empty()) j["target"] = b.target;
  json outs = json::array();
  for (const auto& o : b.outputs) {
    json oj = json::object();
    if (o.distinct) oj["distinct"] = true;
    if (o.all) oj["all"] = true;
    json cols = json::array();
    for (const auto& c : o.cols) {
      json cj = json::object();
      cj["expr"] = expr_json(c.expr.get());
      if (!c.alias.empty()) cj["alias"] = c.alias;
      cols.push_back(std::move(cj));
    }
    oj["cols"] = std::move(cols);
    if (!o.into.empty()) oj["into"] = o.into;
    outs.push_back(std::move(oj));
  }
  j["select"] = std::move(outs);
  json from = json::array();
  for (const auto& a : b.from) {
    json aj = json::object();
    if (a.relational) {
      aj["table"] = a.name;
      aj["var"] = a.var;
    } else {
      aj["graph"] = a.name;
      json paths = json::array();
      for (const auto& p : a.paths) {
        json pj = json::array();
        for (std::size_t i = 0; i < p.nodes.size(); ++i) {
          const auto& n = p.nodes[i];
          json nj = json::object();
          nj["test"] = n.test.wildcard ? json("_") : json(n.test.names);
          if (!n.var.empty()) nj["var"] = n.var;
          pj.push_back(std::move(nj));
          if (i < p.hops.size()) {
            json hj = json::object();
            hj["darpe"] = darpe_json(*p.hops[i].darpe);
            if (!p.hops[i].var.empty()) hj["var"] = p.hops[i].var;
            pj.push_back(std::move(hj));
          }
        }
        paths.push_back(std::move(pj));
      }
      aj["paths"] = std::move(paths);
    }
    from.push_back(std::move(aj));
  }
  j["from"] = std::move(from);
  if (b.where) j["where"] = expr_json(b.where.get());
  if (b.has_accum) j["accum"] = stmts_json(b.accum);
  if (b.has_post_accum) j["post_accum"] = stmts_json(b.post_accum);
  if (!b.group_by.empty()) {
    json g = json::array();
    for (const auto& keys : b.group_by) {
      json kj = json::array();
      for (const auto& k : keys) kj.push_back(expr_json(k.get()));
      g.push_back(std::move(kj));
    }
    j["group_by"] = std::move(g);
  }
  if (!b.having.empty()) {
    json h = json::array();
    for (const auto& e : b.having) h.push_back(expr_json(e.get()));
    j["having"] = std::move(h);
  }
  if (!b.order_by.empty()) {
    json o = json::array();
    for (const auto& items : b.order_by) {
      json ij = json::array();
      for (const auto& item : items) {
        json x = json::object();
        x["expr"] = expr_json(item.expr.get());
        x["desc"] = item.descending;
        x["explicit"] = item.explicit_dir;
        ij.push_back(std::move(x));
      }
      o.push_back(std::move(ij));
    }
    j["order_by"] = std::move(o);
  }
  if (!b.limit.empty()) {
    json l = json::array();
    for (const auto& e : b.limit) l.push_back(expr_json(e.get()));
    j["limit"] = std::move(l);
  }
  return j;
}

json stmt_json(const Stmt& s) {
  static const char* kinds[] = {"decl", "assign", "acc_update", "block", "if",
                                "while", "foreach", "case", "break", "continue"};
  json j = json::object();
  j["kind"] = kinds[static_cast<int>(s.kind)];
  if (s.type) j["type"] = type_json(*s.type);
  if (!s.items.empty()) {
    json items = json::array();
    for (const auto& it : s.items) {
      json ij = json::object();
      ij["name"] = it.name;
      if (it.init) ij["init"] = expr_json(it.init.get());
      items.push_back(std::move(ij));
    }
    j["items"] = std::move(items);
  }
  if (!s.target.empty()) j["target"] = s.target;
  if (s.target_expr) j["target_expr"] = expr_json(s.target_expr.get());
  if (s.kind == StmtKind::AccUpdate) j["plus"] = s.plus;
  if (s.value) j["value"] = expr_json(s.value.get());
  if (s.block) j["block"] = block_json(*s.block);
  if (s.cond) j["cond"] = expr_json(s.cond.get());
  if (s.limit) j["limit"] = expr_json(s.limit.get());
  if (!s.vars.empty()) j["vars"] = s.vars;
  if (s.range) {
    j["lo"] = expr_json(s.lo.get());
    j["hi"] = expr_json(s.hi.get());
  }
  if (s.subject) j["subject"] = expr_json(s.subject.get());
  if (!s.body.empty()) j["body"] = stmts_json(s.body);
  if (!s.branches.empty()) {
    json br = json::array();
    for (const auto& [c, body] : s.branches) br.push_back(json::array({expr_json(c.get()), stmts_json(body)}));
    j["branches"] = std::move(br);
  }
  if (s.has_else) j["else"] = stmts_json(s.else_body);
  return j;
}

json stmts_json(const std::vector<StmtPtr>& stmts) {
  json arr = json::array();
  for (const auto& s : stmts) arr.push_back(stmt_json(*s));
  return arr;
}

json query_json(const Query& q) {
  json j = json::object();
  static const char* forms[] = {"create", "with", "bare"};
  j["form"] = forms[static_cast<int>(q.form)];
  if (!q.name.empty()) j["name"] = q.name;
  json params = json::array();
  for (const auto& p : q.params) {
    json pj = json::object();
    pj["type"] = type_json(p.type);
    pj["name"] = p.name;
    params.push_back(std::move(pj));
  }
  j["params"] = std::move(params);
  if (!q.graph.empty()) j["graph"] = q.graph;
  j["body"] = stmts_json(q.body);
  if (q.ret) j["return"] = expr_json(q.ret.get());
  return j;
}

json attrs_json(const std::vector<AttributeDef>& attrs) {
  json arr = json::array();
  for (const auto& a : attrs) {
    json aj = json::object();
    aj["name"] = a.name;
    aj["type"] = std::string(data_type_name(a.type));
    if (a.is_primary_key) aj["primary_key"] = true;
    arr.push_back(std::move(aj));
  }
  return arr;
}

json ddl_json(const DdlStmt& stmt) {
  json j = json::object();
  if (const auto* v = std::get_if<CreateVertexStmt>(&stmt)) {
    j["vertex"] = v->name;
    j["attributes"] = attrs_json(v->attributes);
  } else if (const auto* e = std::get_if<CreateEdgeStmt>(&stmt)) {
    j["edge"] = e->name;
    j["directed"] = e->directed;
    j["from"] = e->from_type;
    j["to"] = e->to_type;
    j["attributes"] = attrs_json(e->attributes);
    if (!e->discriminators.empty()) j["discriminators"] = e->discriminators;
    if (!e->reverse_name.empty()) j["reverse"] = e->reverse_name;
  } else {
    const auto& g = std::get<CreateGraphStmt>(stmt);
    j["graph"] = g.name;
    j["members"] = g.members;
  }
  return j;
}

}  // namespace

std::string print_expr(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Literal:
      return literal_text(e.literal);
    case ExprKind::Ident:
      return e.name;
    case ExprKind::Attr:
      return operand(*e.args[0]) + "." + e.member;
    case ExprKind::GlobalAcc:
      return "@@" + e.name + (e.primed ? "'" : "");
    case ExprKind::VertexAcc:
      return operand(*e.args[0]) + ".@" + e.member + (e.primed ? "'" : "");
    case ExprKind::Unary:
      return e.op == Op::Not ? "NOT " + operand(*e.args[0]) : "-" + operand(*e.args[0]);
    case ExprKind::Binary:
      return operand(*e.args[0]) + " " + std::string(op_text(e.op)) + " " + operand(*e.args[1]);
    case ExprKind::Between:
      return operand(*e.args[0]) + (e.negated ? " NOT" : "") + " BETWEEN " + operand(*e.args[1]) +
             " AND " + operand(*e.args[2]);
    case ExprKind::In:
      return operand(*e.args[0]) + (e.negated ? " NOT IN " : " IN ") + operand(*e.args[1]);
    case ExprKind::Like:
      return operand(*e.args[0]) + (e.negated ? " NOT LIKE " : " LIKE ") + operand(*e.args[1]);
    case ExprKind::IsNull:
      return operand(*e.args[0]) + (e.negated ? " IS NOT NULL" : " IS NULL");
    case ExprKind::Call:
      return e.name + "(" + join_exprs(e.args) + ")";
    case ExprKind::Method:
      return operand(*e.args[0]) + "." + e.member + "(" + join_exprs(e.args, 1) + ")";
    case ExprKind::Case:
    case ExprKind::CaseValue: {
      std::string out = "CASE";
      std::size_t i = 0;
      if (e.kind == ExprKind::CaseValue) out += " " + print_expr(*e.args[i++]);
      std::size_t end = e.args.size() - (e.has_else ? 1 : 0);
      for (; i < end; i += 2) {
        out += " WHEN " + print_expr(*e.args[i]) + " THEN " + print_expr(*e.args[i + 1]);
      }
      if (e.has_else) out += " ELSE " + print_expr(*e.args.back());
      return out + " END";
    }
    case ExprKind::Tuple:
      return "(" + join_exprs(e.args) + ")";
    case ExprKind::List:
      return "[" + join_exprs(e.args) + "]";
    case ExprKind::MapEntry:
      return "(" + print_expr(*e.args[0]) + " -> " + print_expr(*e.args[1]) + ")";
    case ExprKind::SeedSet: {
      std::string out = "{";
      for (std::size_t i = 0; i < e.args.size(); ++i) out += (i ? ", " : "") + e.args[i]->name + ".*";
      return out + "}";
    }
    case ExprKind::SetLit:
      return "{" + join_exprs(e.args) + "}";
    case ExprKind::Index:
      return operand(*e.args[0]) + "[" + print_expr(*e.args[1]) + "]";
  }
  return "";
}

std::string print_darpe(const Darpe& d) {
  switch (d.kind) {
    case Darpe::Kind::Symbol:
      if (d.dir == Adorn::Forward) return d.edge_type + ">";
      if (d.dir == Adorn::Backward) return "<" + d.edge_type;
      return d.edge_type;
    case Darpe::Kind::Concat:
    case Darpe::Kind::Alt: {
      const char* sep = d.kind == Darpe::Kind::Concat ? "." : "|";
      std::string out;
      for (std::size_t i = 0; i < d.kids.size(); ++i) {
        const Darpe& k = *d.kids[i];
        bool wrap = k.kind == Darpe::Kind::Alt || k.kind == d.kind;
        if (i) out += sep;
        out += wrap ? "(" + print_darpe(k) + ")" : print_darpe(k);
      }
      return out;
    }
    case Darpe::Kind::Star: {
      const Darpe& k = *d.kids[0];
      std::string out = k.kind == Darpe::Kind::Symbol ? print_darpe(k) : "(" + print_darpe(k) + ")";
      out += "*";
      if (d.has_bounds) {
        if (d.lo && d.hi && *d.lo == *d.hi) {
          out += std::to_string(*d.lo);
        } else {
          if (d.lo) out += std::to_string(*d.lo);
          out += "..";
          if (d.hi) out += std::to_string(*d.hi);
        }
      }
      return out;
    }
  }
  return "";
}

std::string print_type(const TypeAst& t) {
  switch (t.cat) {
    case TypeAst::Cat::Base:
      return elem_text(t.base);
    case TypeAst::Cat::Set:
      return "SET<" + print_type(t.params[0]) + ">";
    case TypeAst::Cat::Bag:
      return "BAG<" + print_type(t.params[0]) + ">";
    case TypeAst::Cat::Map:
      return "MAP<" + print_type(t.params[0]) + ", " + print_type(t.params[1]) + ">";
    case TypeAst::Cat::Acc:
      break;
  }
  std::string out = acc_kind_name(t.acc);
  switch (t.acc) {
    case AccKind::Or:
    case AccKind::And:
    case AccKind::BitwiseOr:
    case AccKind::BitwiseAnd:
      return out;
    case AccKind::GroupBy: {
      out += "<";
      for (std::size_t i = 0; i < t.params.size(); ++i) {
        if (i) out += ", ";
        out += print_type(t.params[i]);
        if (i < t.field_names.size() && !t.field_names[i].empty()) out += " " + t.field_names[i];
      }
      return out + ">";
    }
    case AccKind::Heap: {
      out += "<" + print_type(t.params[0]) + ">(" + print_expr(*t.capacity);
      for (const auto& [field, desc] : t.heap_order) out += ", " + field + (desc ? " DESC" : " ASC");
      return out + ")";
    }
    case AccKind::Array: {
      out += "<" + print_type(t.params[0]) + ">";
      for (const auto& d : t.dims) out += "[" + (d ? print_expr(*d) : std::string()) + "]";
      return out;
    }
    default: {
      out += "<";
      for (std::size_t i = 0; i < t.params.size(); ++i) out += (i ? ", " : "") + print_type(t.params[i]);
      return out + ">";
    }
  }
}

std::string print_block(const QueryBlock& b) { return StmtPrinter().block(b, 0); }

std::string print_ddl(const DdlStmt& stmt) {
  auto attrs = [](const std::vector<AttributeDef>& as, std::string out) {
    for (const auto& a : as) {
      if (out.size() > 1) out += ", ";
      out += a.name + " " + std::string(data_type_name(a.type));
      if (a.is_primary_key) out += " PRIMARY KEY";
    }
    return out;
  };
  if (const auto* v = std::get_if<CreateVertexStmt>(&stmt)) {
    return "CREATE VERTEX " + v->name + " " + attrs(v->attributes, "(") + ")";
  }
  if (const auto* e = std::get_if<CreateEdgeStmt>(&stmt)) {
    std::string out = std::string("CREATE ") + (e->directed ? "DIRECTED" : "UNDIRECTED") + " EDGE " +
                      e->name + " (FROM " + e->from_type + ", TO " + e->to_type;
    for (const auto& a : e->attributes) out += ", " + a.name + " " + std::string(data_type_name(a.type));
    out += ")";
    if (!e->discriminators.empty()) {
      out += " DISCRIMINATOR (";
      for (std::size_t i = 0; i < e->discriminators.size(); ++i) out += (i ? ", " : "") + e->discriminators[i];
      out += ")";
    }
    if (!e->reverse_name.empty()) out += " WITH REVERSE EDGE " + e->reverse_name;
    return out;
  }
  const auto& g = std::get<CreateGraphStmt>(stmt);
  std::string out = "CREATE GRAPH " + g.name + " (";
  for (std::size_t i = 0; i < g.members.size(); ++i) out += (i ? ", " : "") + g.members[i];
  return out + ")";
}

std::string print_query(const Query& q) {
  StmtPrinter p;
  std::string out;
  switch (q.form) {
    case QueryForm::Create: {
      out = "CREATE QUERY " + q.name + "(";
      for (std::size_t i = 0; i < q.params.size(); ++i) {
        if (i) out += ", ";
        out += print_type(q.params[i].type) + " " + q.params[i].name;
      }
      out += ")";
      if (!q.graph.empty()) out += " FOR GRAPH " + q.graph;
      out += " {\n" + p.list(q.body, Mode::Top, 2);
      if (q.ret) out += "  RETURN " + print_expr(*q.ret) + ";\n";
      return out + "}\n";
    }
    case QueryForm::With: {
      std::size_t decls = 0;
      while (decls < q.body.size() && q.body[decls]->kind == StmtKind::Decl) ++decls;
      out = "WITH\n";
      for (std::size_t i = 0; i < decls; ++i) out += "  " + p.stmt(*q.body[i], Mode::Top, 2) + ";\n";
      out += "BEGIN\n";
      for (std::size_t i = decls; i < q.body.size(); ++i) out += "  " + p.stmt(*q.body[i], Mode::Top, 2) + ";\n";
      if (q.ret) out += "  RETURN " + print_expr(*q.ret) + ";\n";
      return out + "END\n";
    }
    case QueryForm::Bare:
      return p.block(*q.body[0]->block, 0) + ";\n";
  }
  return out;
}

std::string print_program(const Program& prog) {
  std::string out;
  for (const auto& d : prog.ddl) out += print_ddl(d) + "\n";
  for (const auto& q : prog.queries) out += "\n" + print_query(*q);
  return out;
}

std::string ast_json(const Query& q, int indent) { return query_json(q).dump(indent); }

std::string ast_json(const Program& p, int indent) {
  json j = json::object();
  json ddl = json::array();
  for (const auto& d : p.ddl) ddl.push_back(ddl_json(d));
  j["ddl"] = std::move(ddl);
  json qs = json::array();
  for (const auto& q : p.queries) qs.push_back(query_json(*q));
  j["queries"] = std::move(qs);
  return j.dump(indent);
}

std::string ast_json(const Expr& e, int indent) { return expr_json(&e).dump(indent); }

std::string ast_json(const Darpe& d, int indent) { return darpe_json(d).dump(indent); }

}  // namespace gsql
