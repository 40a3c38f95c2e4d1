#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gsql/accum.hpp"
#include "gsql/catalog.hpp"
#include "gsql/value.hpp"

namespace gsql {

struct DarpeAutomaton;
struct BlockInfo;

// ---- semantic annotations (filled by the checker) ----

enum class TypeKind {
  Unknown,
  Null,
  Bool,
  Int,
  Double,
  String,
  Datetime,
  Vertex,
  Edge,
  Row,
  Tuple,
  Set,
  Bag,
  List,
  Map,
  MapEntry,
  VertexSet,
  Table,
};

struct SemType {
  TypeKind kind = TypeKind::Unknown;
  // Vertex/Edge: type name when statically known. Row/Table: table name.
  std::string name;
  std::shared_ptr<const SemType> elem;
  std::shared_ptr<const SemType> value;

  static SemType of(TypeKind k) { return SemType{k, {}, nullptr, nullptr}; }
};

std::string sem_type_name(const SemType& t);

enum class RefKind { None, Global, BlockVar, Local, Alias };

struct Ref {
  RefKind kind = RefKind::None;
  int index = -1;
};

// ---- expressions ----

enum class ExprKind {
  Literal,
  Ident,
  Attr,       // base.member
  GlobalAcc,  // @@name
  VertexAcc,  // base.@name
  Unary,
  Binary,
  Between,
  In,
  Like,
  IsNull,
  Call,
  Method,  // base.member(args)
  Case,    // CASE WHEN c THEN v ... [ELSE e] END
  CaseValue,
  Tuple,
  List,
  MapEntry,  // (k -> v)
  SeedSet,   // {T.*, ...}
  SetLit,    // {e, ...}
  Index,     // e[i]
};

enum class Op {
  None,
  Neg,
  Not,
  Mul,
  Div,
  Mod,
  Add,
  Sub,
  BitAnd,
  BitOr,
  Intersect,
  Union,
  Minus,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  And,
  Or,
  Contains,
};

std::string_view op_text(Op op);

enum class Builtin {
  None,
  Count,
  Sum,
  Min,
  Max,
  Avg,
  Log,
  Abs,
  Sqrt,
  Pow,
  Floor,
  Ceil,
  ToString,
  ToDatetime,
  Year,
  GetVid,
  Size,
  Outdegree,
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  ExprKind kind = ExprKind::Literal;
  SourcePos pos;
  Value literal;
  // Ident name, function name, accumulator name.
  std::string name;
  // Attribute, vertex accumulator or method name on a base.
  std::string member;
  Op op = Op::None;
  bool primed = false;
  // NOT IN / NOT LIKE / IS NOT NULL / NOT BETWEEN.
  bool negated = false;
  // CASE has an ELSE branch.
  bool has_else = false;
  std::vector<ExprPtr> args;

  // Annotations.
  SemType type;
  Ref ref;
  // Accumulator slot for GlobalAcc / VertexAcc.
  int slot = -1;
  Builtin builtin = Builtin::None;
  bool aggregate = false;
  // Edge type ids for outdegree filters.
  std::vector<int> type_ids;
};

ExprPtr make_expr(ExprKind kind, SourcePos pos);

// ---- types ----

struct TypeAst {
  enum class Cat { Base, Acc, Set, Bag, Map };
  Cat cat = Cat::Base;
  ElemType base;
  AccKind acc = AccKind::Sum;
  // Accumulator type arguments (Map: key, value; GroupBy: fields then accumulators).
  std::vector<TypeAst> params;
  // Names of GroupByAccum fields.
  std::vector<std::string> field_names;
  ExprPtr capacity;
  std::vector<std::pair<std::string, bool>> heap_order;
  std::vector<ExprPtr> dims;
  SourcePos pos;
};

// ---- patterns ----

enum class Adorn { None, Forward, Backward };

struct Darpe;
using DarpePtr = std::unique_ptr<Darpe>;

struct Darpe {
  enum class Kind { Symbol, Concat, Alt, Star };
  Kind kind = Kind::Symbol;
  // Symbol: edge type name, "_" for the wildcard.
  std::string edge_type;
  Adorn dir = Adorn::None;
  std::vector<DarpePtr> kids;
  std::optional<int> lo;
  std::optional<int> hi;
  // Star written with bounds.
  bool has_bounds = false;
  SourcePos pos;
};

struct VTest {
  bool wildcard = false;
  std::vector<std::string> names;
  // Annotations: vertex types accepted, or a global vertex-set slot.
  std::vector<int> type_ids;
  int set_slot = -1;
};

struct PatternNode {
  VTest test;
  std::string var;
  SourcePos pos;
};

struct PatternHop {
  DarpePtr darpe;
  std::string var;
  SourcePos pos;
  std::shared_ptr<const DarpeAutomaton> automaton;
  // Single hop: the directed symbols it admits, for direct edge expansion.
  bool single_hop = false;
};

struct PathPattern {
  std::vector<PatternNode> nodes;
  std::vector<PatternHop> hops;
};

struct Atom {
  bool relational = false;
  // Table name (relational) or graph name (graph atom, may be empty).
  std::string name;
  // Relational tuple variable.
  std::string var;
  std::vector<PathPattern> paths;
  SourcePos pos;
  // Annotation: relational atom's global slot, or -1 for an environment table.
  int table_slot = -1;
};

// ---- statements and blocks ----

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Column {
  ExprPtr expr;
  std::string alias;
};

struct OutTable {
  bool distinct = false;
  bool all = false;
  std::vector<Column> cols;
  std::string into;
  SourcePos pos;
};

struct OrderItem {
  ExprPtr expr;
  bool descending = false;
  bool explicit_dir = false;
};

struct QueryBlock {
  // `S = SELECT ...` target.
  std::string target;
  std::vector<OutTable> outputs;
  std::vector<Atom> from;
  ExprPtr where;
  bool has_accum = false;
  std::vector<StmtPtr> accum;
  bool has_post_accum = false;
  std::vector<StmtPtr> post_accum;
  std::vector<std::vector<ExprPtr>> group_by;
  std::vector<ExprPtr> having;
  std::vector<std::vector<OrderItem>> order_by;
  std::vector<ExprPtr> limit;
  SourcePos pos;

  std::shared_ptr<BlockInfo> info;
};

enum class StmtKind {
  Decl,
  Assign,     // var = expr, optionally typed
  AccUpdate,  // @@A = / += e, x.@A = / += e
  Block,
  If,
  While,
  Foreach,
  Case,
  Break,
  Continue,
};

struct DeclItem {
  std::string name;  // with @/@@ prefix for accumulators
  ExprPtr init;
  SourcePos pos;
  int slot = -1;
};

struct Stmt {
  StmtKind kind = StmtKind::Assign;
  SourcePos pos;

  // Decl / typed assignment.
  std::optional<TypeAst> type;
  std::vector<DeclItem> items;

  // Assign: target variable. AccUpdate: target is a GlobalAcc/VertexAcc expr.
  std::string target;
  ExprPtr target_expr;
  bool plus = false;
  ExprPtr value;

  std::unique_ptr<QueryBlock> block;

  // Control flow.
  ExprPtr cond;
  ExprPtr limit;
  std::vector<std::string> vars;
  bool range = false;
  ExprPtr lo;
  ExprPtr hi;
  ExprPtr subject;
  std::vector<StmtPtr> body;
  std::vector<std::pair<ExprPtr, std::vector<StmtPtr>>> branches;
  bool has_else = false;
  std::vector<StmtPtr> else_body;

  // Annotations: target slot(s).
  Ref target_ref;
  std::vector<Ref> var_refs;
};

struct Param {
  TypeAst type;
  std::string name;
  SourcePos pos;
};

enum class QueryForm { Create, With, Bare };

struct Query {
  QueryForm form = QueryForm::Create;
  std::string name;
  std::vector<Param> params;
  std::string graph;
  std::vector<StmtPtr> body;
  ExprPtr ret;
  SourcePos pos;
};

// A source file: DDL statements and queries in order of appearance.
struct Program {
  std::vector<DdlStmt> ddl;
  std::vector<std::unique_ptr<Query>> queries;
};

}  // namespace gsql
