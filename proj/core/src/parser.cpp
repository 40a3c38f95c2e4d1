#include "gsql/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace gsql {

ExprPtr make_expr(ExprKind kind, SourcePos pos) {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->pos = pos;
  return e;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::optional<AccKind> acc_kind_of(std::string_view word) {
  static const std::pair<const char*, AccKind> kinds[] = {
      {"sumaccum", AccKind::Sum},         {"minaccum", AccKind::Min},
      {"maxaccum", AccKind::Max},         {"avgaccum", AccKind::Avg},
      {"oraccum", AccKind::Or},           {"andaccum", AccKind::And},
      {"setaccum", AccKind::Set},         {"bagaccum", AccKind::Bag},
      {"listaccum", AccKind::List},       {"mapaccum", AccKind::Map},
      {"heapaccum", AccKind::Heap},       {"arrayaccum", AccKind::Array},
      {"groupbyaccum", AccKind::GroupBy}, {"bitwiseoraccum", AccKind::BitwiseOr},
      {"bitwiseandaccum", AccKind::BitwiseAnd},
  };
  std::string w = lower(word);
  for (const auto& [name, kind] : kinds) {
    if (w == name) return kind;
  }
  return std::nullopt;
}

std::optional<ScalarKind> scalar_kind_of(std::string_view word) {
  std::string w = lower(word);
  if (w == "int" || w == "integer") return ScalarKind::Int;
  if (w == "uint") return ScalarKind::UInt;
  if (w == "float") return ScalarKind::Float;
  if (w == "double") return ScalarKind::Double;
  if (w == "string") return ScalarKind::String;
  if (w == "bool" || w == "boolean") return ScalarKind::Bool;
  if (w == "datetime") return ScalarKind::Datetime;
  return std::nullopt;
}

enum class Mode { Top, Acc };

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : t_(tokens) {}

  Program program() {
    Program prog;
    while (!at(Tok::End)) {
      if (accept(Tok::Semi)) continue;
      if (at_kw("CREATE")) {
        const Token& next = peek(1);
        if (next.kind == Tok::Keyword && next.text == "QUERY") {
          prog.queries.push_back(create_query());
        } else {
          prog.ddl.push_back(ddl());
        }
      } else if (at_kw("WITH")) {
        prog.queries.push_back(with_query());
      } else if (at_kw("SELECT")) {
        prog.queries.push_back(bare_query());
      } else {
        error("expected CREATE, WITH or SELECT");
      }
    }
    return prog;
  }

  std::unique_ptr<Query> single_query() {
    std::unique_ptr<Query> q;
    if (at_kw("CREATE")) {
      q = create_query();
    } else if (at_kw("WITH")) {
      q = with_query();
    } else if (at_kw("SELECT")) {
      q = bare_query();
    } else {
      error("expected a query");
    }
    while (accept(Tok::Semi)) {
    }
    expect(Tok::End, "end of input");
    return q;
  }

  ExprPtr whole_expr() {
    ExprPtr e = expr();
    expect(Tok::End, "end of input");
    return e;
  }

  DarpePtr whole_darpe() {
    DarpePtr d = darpe();
    expect(Tok::End, "end of input");
    return d;
  }

 private:
  // ---- token helpers ----
  const Token& peek(std::size_t k = 0) const {
    return i_ + k < t_.size() ? t_[i_ + k] : t_.back();
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_kw(std::string_view kw) const { return at(Tok::Keyword) && peek().text == kw; }
  bool at_kw_n(std::size_t k, std::string_view kw) const {
    return peek(k).kind == Tok::Keyword && peek(k).text == kw;
  }
  const Token& advance() {
    const Token& tok = t_[i_];
    if (i_ + 1 < t_.size()) ++i_;
    return tok;
  }
  bool accept(Tok kind) {
    if (!at(kind)) return false;
    advance();
    return true;
  }
  bool accept_kw(std::string_view kw) {
    if (!at_kw(kw)) return false;
    advance();
    return true;
  }

  [[noreturn]] void error(const std::string& expected) const {
    const Token& tok = peek();
    std::string found = tok.kind == Tok::End ? "end of input" : "'" + tok.text + "'";
    fail(ErrorKind::Parse, expected + ", found " + found, tok.pos);
  }

  const Token& expect(Tok kind, std::string_view what) {
    if (!at(kind)) error("expected " + std::string(what));
    return advance();
  }
  void expect_kw(std::string_view kw) {
    if (!at_kw(kw)) error("expected " + std::string(kw));
    advance();
  }
  std::string ident(std::string_view what = "identifier") {
    return expect(Tok::Ident, what).text;
  }
  // Identifier, also accepting keywords (attribute names such as `end`).
  std::string name_or_keyword() {
    if (at(Tok::Ident)) return advance().text;
    if (at(Tok::Keyword)) return lower(advance().text);
    error("expected a name");
  }

  // ---- DDL ----
  DdlStmt ddl() {
    SourcePos pos = peek().pos;
    expect_kw("CREATE");
    if (accept_kw("VERTEX")) {
      CreateVertexStmt v;
      v.pos = pos;
      v.name = ident("vertex type name");
      expect(Tok::LParen, "'('");
      if (!at(Tok::RParen)) {
        do {
          AttributeDef a;
          a.name = name_or_keyword();
          a.type = data_type();
          if (accept_kw("PRIMARY")) {
            expect_kw("KEY");
            a.is_primary_key = true;
          }
          v.attributes.push_back(a);
        } while (accept(Tok::Comma));
      }
      expect(Tok::RParen, "')'");
      return v;
    }
    if (at_kw("DIRECTED") || at_kw("UNDIRECTED")) {
      CreateEdgeStmt e;
      e.pos = pos;
      e.directed = advance().text == "DIRECTED";
      expect_kw("EDGE");
      e.name = ident("edge type name");
      expect(Tok::LParen, "'('");
      expect_kw("FROM");
      e.from_type = ident("source vertex type");
      expect(Tok::Comma, "','");
      if (!(at(Tok::Ident) && lower(peek().text) == "to")) error("expected TO");
      advance();
      e.to_type = ident("target vertex type");
      while (accept(Tok::Comma)) {
        AttributeDef a;
        a.name = name_or_keyword();
        a.type = data_type();
        e.attributes.push_back(a);
      }
      expect(Tok::RParen, "')'");
      if (accept_kw("DISCRIMINATOR")) {
        expect(Tok::LParen, "'('");
        do {
          e.discriminators.push_back(name_or_keyword());
        } while (accept(Tok::Comma));
        expect(Tok::RParen, "')'");
      }
      if (accept_kw("WITH")) {
        expect_kw("REVERSE");
        expect_kw("EDGE");
        e.reverse_name = ident("reverse edge name");
      }
      return e;
    }
    if (accept_kw("GRAPH")) {
      CreateGraphStmt g;
      g.pos = pos;
      g.name = ident("graph name");
      expect(Tok::LParen, "'('");
      if (!at(Tok::RParen)) {
        do {
          g.members.push_back(ident("member type"));
        } while (accept(Tok::Comma));
      }
      expect(Tok::RParen, "')'");
      return g;
    }
    error("expected VERTEX, DIRECTED, UNDIRECTED, GRAPH or QUERY");
  }

  DataType data_type() {
    std::string word = at(Tok::Ident) ? peek().text : "";
    auto t = parse_data_type(word);
    if (!t) error("expected an attribute type");
    advance();
    return *t;
  }

  // ---- queries ----
  std::unique_ptr<Query> create_query() {
    auto q = std::make_unique<Query>();
    q->form = QueryForm::Create;
    q->pos = peek().pos;
    expect_kw("CREATE");
    expect_kw("QUERY");
    q->name = ident("query name");
    expect(Tok::LParen, "'('");
    if (!at(Tok::RParen)) {
      do {
        Param p;
        p.pos = peek().pos;
        p.type = param_type();
        p.name = ident("parameter name");
        q->params.push_back(std::move(p));
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    if (accept_kw("FOR")) {
      expect_kw("GRAPH");
      q->graph = ident("graph name");
    }
    expect(Tok::LBrace, "'{'");
    q->body = stmt_list(Mode::Top, /*allow_decls=*/true);
    if (accept_kw("RETURN")) {
      q->ret = expr();
      accept(Tok::Semi);
    }
    expect(Tok::RBrace, "'}'");
    return q;
  }

  std::unique_ptr<Query> with_query() {
    auto q = std::make_unique<Query>();
    q->form = QueryForm::With;
    q->pos = peek().pos;
    expect_kw("WITH");
    while (!at_kw("BEGIN")) {
      if (accept(Tok::Semi)) continue;
      if (!starts_acc_type() && !starts_base_type()) error("expected a declaration or BEGIN");
      q->body.push_back(stmt(Mode::Top));
    }
    expect_kw("BEGIN");
    auto rest = stmt_list(Mode::Top, true);
    for (auto& s : rest) q->body.push_back(std::move(s));
    if (accept_kw("RETURN")) {
      q->ret = expr();
      accept(Tok::Semi);
    }
    expect_kw("END");
    return q;
  }

  std::unique_ptr<Query> bare_query() {
    auto q = std::make_unique<Query>();
    q->form = QueryForm::Bare;
    q->pos = peek().pos;
    auto s = std::make_unique<Stmt>();
    s->kind = StmtKind::Block;
    s->pos = peek().pos;
    s->block = block("");
    q->body.push_back(std::move(s));
    return q;
  }

  // ---- types ----
  bool starts_acc_type() const { return at(Tok::Ident) && acc_kind_of(peek().text).has_value(); }

  bool starts_base_type() const {
    if (at_kw("VERTEX") || at_kw("EDGE")) return true;
    if (!at(Tok::Ident)) return false;
    if (lower(peek().text) == "tuple" && peek(1).kind == Tok::Lt) return true;
    return scalar_kind_of(peek().text).has_value() && peek(1).kind == Tok::Ident;
  }

  ElemType base_type() {
    ElemType t;
    if (at_kw("VERTEX") || at_kw("EDGE")) {
      t.kind = advance().text == "VERTEX" ? ScalarKind::Vertex : ScalarKind::Edge;
      if (accept(Tok::Lt)) {
        t.type_name = ident("type name");
        expect(Tok::Gt, "'>'");
      }
      return t;
    }
    if (at(Tok::Ident) && lower(peek().text) == "tuple") {
      advance();
      t.kind = ScalarKind::Tuple;
      expect(Tok::Lt, "'<'");
      do {
        ElemType f = base_type();
        if (f.kind == ScalarKind::Tuple) error("nested tuple types are not supported");
        std::string name = name_or_keyword();
        t.fields.emplace_back(f.kind, name);
      } while (accept(Tok::Comma));
      expect(Tok::Gt, "'>'");
      return t;
    }
    if (at(Tok::Ident)) {
      if (auto k = scalar_kind_of(peek().text)) {
        advance();
        t.kind = *k;
        return t;
      }
    }
    error("expected a type");
  }

  TypeAst type_or_acc() {
    if (starts_acc_type()) return acc_type();
    TypeAst t;
    t.pos = peek().pos;
    t.base = base_type();
    return t;
  }

  TypeAst acc_type() {
    TypeAst t;
    t.cat = TypeAst::Cat::Acc;
    t.pos = peek().pos;
    t.acc = *acc_kind_of(advance().text);
    switch (t.acc) {
      case AccKind::Or:
      case AccKind::And:
      case AccKind::BitwiseOr:
      case AccKind::BitwiseAnd:
        return t;
      case AccKind::Map:
        expect(Tok::Lt, "'<'");
        t.params.push_back(type_or_acc());
        expect(Tok::Comma, "','");
        t.params.push_back(type_or_acc());
        expect(Tok::Gt, "'>'");
        return t;
      case AccKind::GroupBy:
        expect(Tok::Lt, "'<'");
        do {
          t.params.push_back(type_or_acc());
          if (at(Tok::Ident) || at(Tok::Keyword)) {
            t.field_names.push_back(name_or_keyword());
          } else {
            t.field_names.emplace_back();
          }
        } while (accept(Tok::Comma));
        expect(Tok::Gt, "'>'");
        return t;
      case AccKind::Heap:
        expect(Tok::Lt, "'<'");
        t.params.push_back(type_or_acc());
        expect(Tok::Gt, "'>'");
        expect(Tok::LParen, "'('");
        t.capacity = primary();
        while (accept(Tok::Comma)) {
          std::string field = name_or_keyword();
          bool desc = false;
          if (accept_kw("DESC")) {
            desc = true;
          } else {
            accept_kw("ASC");
          }
          t.heap_order.emplace_back(field, desc);
        }
        expect(Tok::RParen, "')'");
        return t;
      case AccKind::Array:
        expect(Tok::Lt, "'<'");
        t.params.push_back(type_or_acc());
        expect(Tok::Gt, "'>'");
        while (accept(Tok::LBracket)) {
          t.dims.push_back(at(Tok::RBracket) ? nullptr : expr());
          expect(Tok::RBracket, "']'");
        }
        return t;
      default:
        expect(Tok::Lt, "'<'");
        t.params.push_back(type_or_acc());
        expect(Tok::Gt, "'>'");
        return t;
    }
  }

  TypeAst param_type() {
    TypeAst t;
    t.pos = peek().pos;
    if (at(Tok::Ident) && peek(1).kind == Tok::Lt) {
      std::string w = lower(peek().text);
      if (w == "set" || w == "bag" || w == "map") {
        advance();
        advance();
        t.cat = w == "set" ? TypeAst::Cat::Set : w == "bag" ? TypeAst::Cat::Bag : TypeAst::Cat::Map;
        TypeAst inner;
        inner.pos = peek().pos;
        inner.base = base_type();
        t.params.push_back(std::move(inner));
        if (t.cat == TypeAst::Cat::Map) {
          expect(Tok::Comma, "','");
          TypeAst v;
          v.pos = peek().pos;
          v.base = base_type();
          t.params.push_back(std::move(v));
        }
        expect(Tok::Gt, "'>'");
        return t;
      }
    }
    t.base = base_type();
    return t;
  }

  // ---- statements ----
  bool at_terminator() const {
    return at(Tok::End) || at(Tok::RBrace) || at_kw("END") || at_kw("ELSE") || at_kw("WHEN") ||
           at_kw("RETURN");
  }

  std::vector<StmtPtr> stmt_list(Mode mode, bool allow_decls) {
    std::vector<StmtPtr> out;
    if (mode == Mode::Top) {
      while (!at_terminator()) {
        if (accept(Tok::Semi)) continue;
        if (!allow_decls && (starts_acc_type())) error("accumulator declarations belong at query level");
        out.push_back(stmt(Mode::Top));
        if (!accept(Tok::Semi) && !at_terminator()) error("expected ';'");
      }
      return out;
    }
    out.push_back(stmt(Mode::Acc));
    while (accept(Tok::Comma)) out.push_back(stmt(Mode::Acc));
    return out;
  }

  std::vector<StmtPtr> body_list(Mode mode) {
    if (mode == Mode::Top) return stmt_list(Mode::Top, false);
    return stmt_list(Mode::Acc, false);
  }

  StmtPtr stmt(Mode mode) {
    auto s = std::make_unique<Stmt>();
    s->pos = peek().pos;
    if (accept_kw("IF")) {
      s->kind = StmtKind::If;
      s->cond = expr();
      expect_kw("THEN");
      s->body = body_list(mode);
      if (accept_kw("ELSE")) {
        s->has_else = true;
        s->else_body = body_list(mode);
      }
      expect_kw("END");
      return s;
    }
    if (accept_kw("WHILE")) {
      s->kind = StmtKind::While;
      s->cond = expr();
      if (accept_kw("LIMIT")) s->limit = expr();
      expect_kw("DO");
      s->body = body_list(mode);
      expect_kw("END");
      return s;
    }
    if (accept_kw("FOREACH")) {
      s->kind = StmtKind::Foreach;
      if (accept(Tok::LParen)) {
        do {
          s->vars.push_back(ident("loop variable"));
        } while (accept(Tok::Comma));
        expect(Tok::RParen, "')'");
      } else {
        s->vars.push_back(ident("loop variable"));
      }
      expect_kw("IN");
      if (accept_kw("RANGE")) {
        s->range = true;
        bool bracket = accept(Tok::LBracket);
        if (!bracket) expect(Tok::LParen, "'('");
        s->lo = expr();
        expect(Tok::Comma, "','");
        s->hi = expr();
        expect(bracket ? Tok::RBracket : Tok::RParen, bracket ? "']'" : "')'");
      } else {
        s->subject = expr();
      }
      expect_kw("DO");
      s->body = body_list(mode);
      expect_kw("END");
      return s;
    }
    if (accept_kw("CASE")) {
      s->kind = StmtKind::Case;
      if (!at_kw("WHEN")) s->subject = expr();
      while (accept_kw("WHEN")) {
        ExprPtr c = expr();
        expect_kw("THEN");
        s->branches.emplace_back(std::move(c), body_list(mode));
      }
      if (s->branches.empty()) error("expected WHEN");
      if (accept_kw("ELSE")) {
        s->has_else = true;
        s->else_body = body_list(mode);
      }
      expect_kw("END");
      return s;
    }
    if (accept_kw("BREAK")) {
      s->kind = StmtKind::Break;
      return s;
    }
    if (accept_kw("CONTINUE")) {
      s->kind = StmtKind::Continue;
      return s;
    }
    if (at_kw("SELECT")) {
      if (mode != Mode::Top) error("query blocks are not allowed here");
      s->kind = StmtKind::Block;
      s->block = block("");
      return s;
    }
    if (starts_acc_type()) {
      if (mode != Mode::Top) error("accumulator declarations are not allowed here");
      s->kind = StmtKind::Decl;
      s->type = acc_type();
      do {
        DeclItem item;
        item.pos = peek().pos;
        if (at(Tok::GlobalAcc)) {
          item.name = "@@" + advance().text;
        } else if (at(Tok::VertexAcc)) {
          item.name = "@" + advance().text;
        } else {
          error("expected an accumulator name");
        }
        if (accept(Tok::Eq)) item.init = expr();
        s->items.push_back(std::move(item));
      } while (accept(Tok::Comma) && (at(Tok::GlobalAcc) || at(Tok::VertexAcc)));
      return s;
    }
    if (starts_base_type()) {
      s->kind = StmtKind::Decl;
      TypeAst t;
      t.pos = peek().pos;
      t.base = base_type();
      s->type = std::move(t);
      // In ACCUM, a comma ends the declaration (it separates statements).
      do {
        DeclItem item;
        item.pos = peek().pos;
        item.name = ident("variable name");
        if (accept(Tok::Eq)) item.init = expr();
        s->items.push_back(std::move(item));
      } while (mode == Mode::Top && accept(Tok::Comma));
      return s;
    }
    if (at(Tok::GlobalAcc)) {
      s->kind = StmtKind::AccUpdate;
      s->target_expr = primary();
      acc_op(*s);
      return s;
    }
    if (at(Tok::Ident)) {
      if (peek(1).kind == Tok::Eq && at_kw_n(2, "SELECT")) {
        if (mode != Mode::Top) error("query blocks are not allowed here");
        s->kind = StmtKind::Block;
        std::string target = advance().text;
        advance();
        s->block = block(target);
        return s;
      }
      if (peek(1).kind == Tok::Eq) {
        s->kind = StmtKind::Assign;
        s->target = advance().text;
        advance();
        s->value = expr();
        return s;
      }
      if (peek(1).kind == Tok::Dot && peek(2).kind == Tok::VertexAcc) {
        s->kind = StmtKind::AccUpdate;
        s->target_expr = postfix();
        acc_op(*s);
        return s;
      }
    }
    error("expected a statement");
  }

  void acc_op(Stmt& s) {
    if (accept(Tok::PlusAssign)) {
      s.plus = true;
    } else if (!accept(Tok::Eq)) {
      error("expected '=' or '+='");
    }
    s.value = expr();
  }

  // ---- query blocks ----
  std::unique_ptr<QueryBlock> block(std::string target) {
    auto b = std::make_unique<QueryBlock>();
    b->target = std::move(target);
    b->pos = peek().pos;
    expect_kw("SELECT");
    // A SELECT always has a FROM, so a ';' before it separates output tables.
    do {
      b->outputs.push_back(out_table());
    } while (accept(Tok::Semi));
    expect_kw("FROM");
    from_clause(*b);
    std::size_t n = b->outputs.size();
    bool seen_where = false, seen_accum = false, seen_post = false, seen_group = false,
         seen_having = false, seen_order = false, seen_limit = false;
    auto once = [&](bool& flag, const char* clause) {
      if (flag) error(std::string("duplicate ") + clause + " clause");
      flag = true;
    };
    while (true) {
      if (at_kw("WHERE")) {
        once(seen_where, "WHERE");
        advance();
        b->where = expr();
      } else if (at_kw("ACCUM")) {
        once(seen_accum, "ACCUM");
        advance();
        b->has_accum = true;
        b->accum = stmt_list(Mode::Acc, false);
      } else if (at_kw("POST_ACCUM")) {
        once(seen_post, "POST_ACCUM");
        advance();
        b->has_post_accum = true;
        b->post_accum = stmt_list(Mode::Acc, false);
      } else if (at_kw("GROUP")) {
        once(seen_group, "GROUP BY");
        advance();
        expect_kw("BY");
        do {
          std::vector<ExprPtr> keys;
          do {
            keys.push_back(expr());
          } while (accept(Tok::Comma));
          b->group_by.push_back(std::move(keys));
        } while (b->group_by.size() < n && accept(Tok::Semi));
      } else if (at_kw("HAVING")) {
        once(seen_having, "HAVING");
        advance();
        do {
          b->having.push_back(expr());
        } while (b->having.size() < n && accept(Tok::Semi));
      } else if (at_kw("ORDER")) {
        once(seen_order, "ORDER BY");
        advance();
        expect_kw("BY");
        do {
          std::vector<OrderItem> items;
          do {
            OrderItem item;
            item.expr = expr();
            if (accept_kw("DESC")) {
              item.descending = true;
              item.explicit_dir = true;
            } else if (accept_kw("ASC")) {
              item.explicit_dir = true;
            }
            items.push_back(std::move(item));
          } while (accept(Tok::Comma));
          b->order_by.push_back(std::move(items));
        } while (b->order_by.size() < n && accept(Tok::Semi));
      } else if (at_kw("LIMIT")) {
        once(seen_limit, "LIMIT");
        advance();
        do {
          b->limit.push_back(expr());
        } while (b->limit.size() < n && accept(Tok::Semi));
      } else {
        break;
      }
    }
    return b;
  }

  OutTable out_table() {
    OutTable out;
    out.pos = peek().pos;
    if (accept_kw("DISTINCT")) {
      out.distinct = true;
    } else if (accept_kw("ALL")) {
      out.all = true;
    }
    do {
      Column c;
      c.expr = expr();
      if (accept_kw("AS")) c.alias = ident("column name");
      out.cols.push_back(std::move(c));
    } while (accept(Tok::Comma));
    if (accept_kw("INTO")) out.into = ident("table name");
    return out;
  }

  // `Id AS ...` or `Id Id` starts an atom that names a table or graph.
  bool named_atom_start() const {
    if (!at(Tok::Ident)) return false;
    if (at_kw_n(1, "AS")) return true;
    return peek(1).kind == Tok::Ident;
  }

  void from_clause(QueryBlock& b) {
    do {
      if (!b.from.empty() && !b.from.back().relational && !named_atom_start()) {
        b.from.back().paths.push_back(path_pattern());
        continue;
      }
      b.from.push_back(atom());
    } while (accept(Tok::Comma));
  }

  Atom atom() {
    Atom a;
    a.pos = peek().pos;
    if (named_atom_start()) {
      std::string first = advance().text;
      accept_kw("AS");
      // After the name: a table's tuple variable, or a graph's pattern.
      if (at(Tok::Ident) && !(peek(1).kind == Tok::Colon || peek(1).kind == Tok::Pipe ||
                              (peek(1).kind == Tok::Minus && peek(2).kind == Tok::LParen))) {
        a.relational = true;
        a.name = first;
        a.var = advance().text;
        return a;
      }
      a.name = first;
      a.paths.push_back(path_pattern());
      return a;
    }
    a.paths.push_back(path_pattern());
    return a;
  }

  PatternNode pattern_node() {
    PatternNode n;
    n.pos = peek().pos;
    if (at(Tok::Ident) && peek().text == "_") {
      advance();
      n.test.wildcard = true;
    } else {
      n.test.names.push_back(ident("vertex type or vertex set"));
      while (accept(Tok::Pipe)) n.test.names.push_back(ident("vertex type"));
    }
    if (accept(Tok::Colon)) n.var = ident("variable");
    return n;
  }

  PathPattern path_pattern() {
    PathPattern p;
    p.nodes.push_back(pattern_node());
    while (at(Tok::Minus) && peek(1).kind == Tok::LParen) {
      PatternHop hop;
      hop.pos = peek().pos;
      advance();
      advance();
      hop.darpe = darpe();
      if (accept(Tok::Colon)) hop.var = ident("edge variable");
      expect(Tok::RParen, "')'");
      expect(Tok::Minus, "'-'");
      p.hops.push_back(std::move(hop));
      p.nodes.push_back(pattern_node());
    }
    return p;
  }

  // ---- DARPEs ----
  DarpePtr darpe() {
    DarpePtr first = darpe_concat();
    if (!at(Tok::Pipe)) return first;
    auto alt = std::make_unique<Darpe>();
    alt->kind = Darpe::Kind::Alt;
    alt->pos = first->pos;
    alt->kids.push_back(std::move(first));
    while (accept(Tok::Pipe)) alt->kids.push_back(darpe_concat());
    return alt;
  }

  DarpePtr darpe_concat() {
    DarpePtr first = darpe_postfix();
    if (!at(Tok::Dot)) return first;
    auto cat = std::make_unique<Darpe>();
    cat->kind = Darpe::Kind::Concat;
    cat->pos = first->pos;
    cat->kids.push_back(std::move(first));
    while (accept(Tok::Dot)) cat->kids.push_back(darpe_postfix());
    return cat;
  }

  int bound_int() {
    const Token& tok = expect(Tok::Int, "a repetition bound");
    int v = 0;
    auto r = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
    if (r.ec != std::errc()) fail(ErrorKind::Parse, "repetition bound out of range", tok.pos);
    return v;
  }

  DarpePtr darpe_postfix() {
    DarpePtr d = darpe_atom();
    while (at(Tok::Star)) {
      auto star = std::make_unique<Darpe>();
      star->kind = Darpe::Kind::Star;
      star->pos = peek().pos;
      advance();
      if (at(Tok::Int)) {
        star->has_bounds = true;
        star->lo = bound_int();
        if (accept(Tok::DotDot)) {
          if (at(Tok::Int)) star->hi = bound_int();
        } else {
          star->hi = star->lo;
        }
      } else if (accept(Tok::DotDot)) {
        star->has_bounds = true;
        star->hi = bound_int();
      }
      if (star->lo && star->hi && *star->lo > *star->hi)
        fail(ErrorKind::Parse, "empty repetition range", star->pos);
      star->kids.push_back(std::move(d));
      d = std::move(star);
    }
    return d;
  }

  DarpePtr darpe_atom() {
    auto d = std::make_unique<Darpe>();
    d->pos = peek().pos;
    if (accept(Tok::LParen)) {
      DarpePtr inner = darpe();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (accept(Tok::Lt)) {
      d->dir = Adorn::Backward;
      d->edge_type = ident("edge type");
      return d;
    }
    d->edge_type = ident("edge type");
    if (accept(Tok::Gt)) d->dir = Adorn::Forward;
    return d;
  }

  // ---- expressions ----
  ExprPtr binary(Op op, ExprPtr lhs, ExprPtr rhs) {
    auto e = make_expr(ExprKind::Binary, lhs->pos);
    e->op = op;
    e->args.push_back(std::move(lhs));
    e->args.push_back(std::move(rhs));
    return e;
  }

  ExprPtr expr() { return or_expr(); }

  ExprPtr or_expr() {
    ExprPtr e = and_expr();
    while (accept_kw("OR")) e = binary(Op::Or, std::move(e), and_expr());
    return e;
  }

  ExprPtr and_expr() {
    ExprPtr e = not_expr();
    while (accept_kw("AND")) e = binary(Op::And, std::move(e), not_expr());
    return e;
  }

  ExprPtr not_expr() {
    if (at_kw("NOT")) {
      auto e = make_expr(ExprKind::Unary, peek().pos);
      advance();
      e->op = Op::Not;
      e->args.push_back(not_expr());
      return e;
    }
    return cmp_expr();
  }

  ExprPtr cmp_expr() {
    ExprPtr lhs = setop_expr();
    auto cmp_op = [&]() -> Op {
      switch (peek().kind) {
        case Tok::Eq:
        case Tok::EqEq:
          return Op::Eq;
        case Tok::Ne:
          return Op::Ne;
        case Tok::Lt:
          return Op::Lt;
        case Tok::Le:
          return Op::Le;
        case Tok::Gt:
          return Op::Gt;
        case Tok::Ge:
          return Op::Ge;
        default:
          return Op::None;
      }
    };
    Op op = cmp_op();
    if (op != Op::None) {
      advance();
      return binary(op, std::move(lhs), setop_expr());
    }
    if (at_kw("CONTAINS")) {
      advance();
      return binary(Op::Contains, std::move(lhs), setop_expr());
    }
    bool negated = false;
    if (at_kw("NOT") && (at_kw_n(1, "IN") || at_kw_n(1, "LIKE") || at_kw_n(1, "BETWEEN"))) {
      advance();
      negated = true;
    }
    if (at_kw("BETWEEN")) {
      auto e = make_expr(ExprKind::Between, lhs->pos);
      advance();
      e->negated = negated;
      e->args.push_back(std::move(lhs));
      e->args.push_back(setop_expr());
      expect_kw("AND");
      e->args.push_back(setop_expr());
      return e;
    }
    if (at_kw("IN") || at_kw("LIKE")) {
      auto e = make_expr(at_kw("IN") ? ExprKind::In : ExprKind::Like, lhs->pos);
      advance();
      e->negated = negated;
      e->args.push_back(std::move(lhs));
      e->args.push_back(setop_expr());
      return e;
    }
    if (at_kw("IS")) {
      auto e = make_expr(ExprKind::IsNull, lhs->pos);
      advance();
      e->negated = accept_kw("NOT");
      expect_kw("NULL");
      e->args.push_back(std::move(lhs));
      return e;
    }
    return lhs;
  }

  ExprPtr setop_expr() {
    ExprPtr e = intersect_expr();
    while (at_kw("UNION") || at_kw("MINUS")) {
      Op op = advance().text == "UNION" ? Op::Union : Op::Minus;
      e = binary(op, std::move(e), intersect_expr());
    }
    return e;
  }

  ExprPtr intersect_expr() {
    ExprPtr e = bitor_expr();
    while (accept_kw("INTERSECT")) e = binary(Op::Intersect, std::move(e), bitor_expr());
    return e;
  }

  ExprPtr bitor_expr() {
    ExprPtr e = bitand_expr();
    while (accept(Tok::Pipe)) e = binary(Op::BitOr, std::move(e), bitand_expr());
    return e;
  }

  ExprPtr bitand_expr() {
    ExprPtr e = add_expr();
    while (accept(Tok::Amp)) e = binary(Op::BitAnd, std::move(e), add_expr());
    return e;
  }

  ExprPtr add_expr() {
    ExprPtr e = mul_expr();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      Op op = advance().kind == Tok::Plus ? Op::Add : Op::Sub;
      e = binary(op, std::move(e), mul_expr());
    }
    return e;
  }

  ExprPtr mul_expr() {
    ExprPtr e = unary_expr();
    while (at(Tok::Star) || at(Tok::Slash) || at(Tok::Percent)) {
      Tok k = advance().kind;
      Op op = k == Tok::Star ? Op::Mul : k == Tok::Slash ? Op::Div : Op::Mod;
      e = binary(op, std::move(e), unary_expr());
    }
    return e;
  }

  ExprPtr unary_expr() {
    if (at(Tok::Minus)) {
      auto e = make_expr(ExprKind::Unary, peek().pos);
      advance();
      e->op = Op::Neg;
      e->args.push_back(unary_expr());
      return e;
    }
    return postfix();
  }

  ExprPtr postfix() {
    ExprPtr e = primary();
    while (true) {
      if (at(Tok::Dot)) {
        SourcePos pos = peek().pos;
        advance();
        if (at(Tok::VertexAcc)) {
          auto acc = make_expr(ExprKind::VertexAcc, pos);
          const Token& tok = advance();
          acc->member = tok.text;
          acc->primed = tok.primed;
          acc->args.push_back(std::move(e));
          e = std::move(acc);
          continue;
        }
        std::string member = at(Tok::Ident) ? advance().text : name_or_keyword();
        if (at(Tok::LParen)) {
          auto m = make_expr(ExprKind::Method, pos);
          m->member = member;
          m->args.push_back(std::move(e));
          advance();
          if (!at(Tok::RParen)) {
            do {
              m->args.push_back(expr());
            } while (accept(Tok::Comma));
          }
          expect(Tok::RParen, "')'");
          e = std::move(m);
          continue;
        }
        auto a = make_expr(ExprKind::Attr, pos);
        a->member = member;
        a->args.push_back(std::move(e));
        e = std::move(a);
        continue;
      }
      if (at(Tok::LBracket)) {
        auto idx = make_expr(ExprKind::Index, peek().pos);
        advance();
        idx->args.push_back(std::move(e));
        idx->args.push_back(expr());
        expect(Tok::RBracket, "']'");
        e = std::move(idx);
        continue;
      }
      return e;
    }
  }

  ExprPtr literal(Value v, SourcePos pos) {
    auto e = make_expr(ExprKind::Literal, pos);
    e->literal = std::move(v);
    return e;
  }

  ExprPtr primary() {
    const Token& tok = peek();
    SourcePos pos = tok.pos;
    switch (tok.kind) {
      case Tok::Int: {
        std::int64_t v = 0;
        auto r = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
        if (r.ec != std::errc()) fail(ErrorKind::Parse, "integer literal out of range", pos);
        advance();
        return literal(Value(v), pos);
      }
      case Tok::Float: {
        double v = 0;
        std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
        advance();
        return literal(Value(v), pos);
      }
      case Tok::String: {
        std::string s = tok.text;
        advance();
        return literal(Value(std::move(s)), pos);
      }
      case Tok::GlobalAcc: {
        auto e = make_expr(ExprKind::GlobalAcc, pos);
        e->name = tok.text;
        e->primed = tok.primed;
        advance();
        return e;
      }
      case Tok::LParen: {
        advance();
        std::vector<ExprPtr> items;
        if (!at(Tok::RParen)) {
          do {
            items.push_back(expr());
          } while (accept(Tok::Comma));
        }
        if (accept(Tok::Arrow)) {
          std::vector<ExprPtr> values;
          do {
            values.push_back(expr());
          } while (accept(Tok::Comma));
          expect(Tok::RParen, "')'");
          auto e = make_expr(ExprKind::MapEntry, pos);
          e->args.push_back(pack(std::move(items), pos));
          e->args.push_back(pack(std::move(values), pos));
          return e;
        }
        expect(Tok::RParen, "')'");
        if (items.size() == 1) return std::move(items[0]);
        auto e = make_expr(ExprKind::Tuple, pos);
        e->args = std::move(items);
        return e;
      }
      case Tok::LBracket: {
        advance();
        auto e = make_expr(ExprKind::List, pos);
        if (!at(Tok::RBracket)) {
          do {
            e->args.push_back(expr());
          } while (accept(Tok::Comma));
        }
        expect(Tok::RBracket, "']'");
        return e;
      }
      case Tok::LBrace: {
        advance();
        if (at(Tok::Ident) && peek(1).kind == Tok::Dot && peek(2).kind == Tok::Star) {
          auto e = make_expr(ExprKind::SeedSet, pos);
          do {
            auto name = make_expr(ExprKind::Ident, peek().pos);
            name->name = ident("vertex type");
            expect(Tok::Dot, "'.'");
            expect(Tok::Star, "'*'");
            e->args.push_back(std::move(name));
          } while (accept(Tok::Comma));
          expect(Tok::RBrace, "'}'");
          return e;
        }
        auto e = make_expr(ExprKind::SetLit, pos);
        if (!at(Tok::RBrace)) {
          do {
            e->args.push_back(expr());
          } while (accept(Tok::Comma));
        }
        expect(Tok::RBrace, "'}'");
        return e;
      }
      case Tok::Keyword: {
        if (tok.text == "TRUE" || tok.text == "FALSE") {
          bool b = tok.text == "TRUE";
          advance();
          return literal(Value(b), pos);
        }
        if (tok.text == "NULL") {
          advance();
          return literal(Value(), pos);
        }
        if (tok.text == "CASE") return case_expr();
        break;
      }
      case Tok::Ident: {
        std::string name = tok.text;
        advance();
        if (at(Tok::LParen)) {
          auto e = make_expr(ExprKind::Call, pos);
          e->name = name;
          advance();
          if (!at(Tok::RParen)) {
            do {
              e->args.push_back(expr());
            } while (accept(Tok::Comma));
          }
          expect(Tok::RParen, "')'");
          return e;
        }
        auto e = make_expr(ExprKind::Ident, pos);
        e->name = name;
        return e;
      }
      default:
        break;
    }
    error("expected an expression");
  }

  ExprPtr pack(std::vector<ExprPtr> items, SourcePos pos) {
    if (items.size() == 1) return std::move(items[0]);
    auto e = make_expr(ExprKind::Tuple, pos);
    e->args = std::move(items);
    return e;
  }

  ExprPtr case_expr() {
    SourcePos pos = peek().pos;
    expect_kw("CASE");
    ExprPtr e;
    if (at_kw("WHEN")) {
      e = make_expr(ExprKind::Case, pos);
    } else {
      e = make_expr(ExprKind::CaseValue, pos);
      e->args.push_back(expr());
    }
    bool any = false;
    while (accept_kw("WHEN")) {
      any = true;
      e->args.push_back(expr());
      expect_kw("THEN");
      e->args.push_back(expr());
    }
    if (!any) error("expected WHEN");
    if (accept_kw("ELSE")) {
      e->has_else = true;
      e->args.push_back(expr());
    }
    expect_kw("END");
    return e;
  }

  const std::vector<Token>& t_;
  std::size_t i_ = 0;
};

}  // namespace

Program parse(const std::vector<Token>& tokens) { return Parser(tokens).program(); }

Program parse_program(std::string_view text) {
  auto tokens = tokenize(text);
  return parse(tokens);
}

std::unique_ptr<Query> parse_query(std::string_view text) {
  auto tokens = tokenize(text);
  return Parser(tokens).single_query();
}

ExprPtr parse_expression(std::string_view text) {
  auto tokens = tokenize(text);
  return Parser(tokens).whole_expr();
}

DarpePtr parse_darpe(std::string_view text) {
  auto tokens = tokenize(text);
  return Parser(tokens).whole_darpe();
}

}  // namespace gsql
