#include "gsql/ast.hpp"

namespace gsql {

std::string_view op_text(Op op) {
  switch (op) {
    case Op::None:
      return "";
    case Op::Neg:
      return "-";
    case Op::Not:
      return "NOT";
    case Op::Mul:
      return "*";
    case Op::Div:
      return "/";
    case Op::Mod:
      return "%";
    case Op::Add:
      return "+";
    case Op::Sub:
      return "-";
    case Op::BitAnd:
      return "&";
    case Op::BitOr:
      return "|";
    case Op::Intersect:
      return "INTERSECT";
    case Op::Union:
      return "UNION";
    case Op::Minus:
      return "MINUS";
    case Op::Eq:
      return "=";
    case Op::Ne:
      return "<>";
    case Op::Lt:
      return "<";
    case Op::Le:
      return "<=";
    case Op::Gt:
      return ">";
    case Op::Ge:
      return ">=";
    case Op::And:
      return "AND";
    case Op::Or:
      return "OR";
    case Op::Contains:
      return "CONTAINS";
  }
  return "?";
}

std::string sem_type_name(const SemType& t) {
  auto with_elem = [&](const char* name) {
    return std::string(name) + "<" + (t.elem ? sem_type_name(*t.elem) : "?") + ">";
  };
  switch (t.kind) {
    case TypeKind::Unknown:
      return "unknown";
    case TypeKind::Null:
      return "null";
    case TypeKind::Bool:
      return "bool";
    case TypeKind::Int:
      return "int";
    case TypeKind::Double:
      return "float";
    case TypeKind::String:
      return "string";
    case TypeKind::Datetime:
      return "datetime";
    case TypeKind::Vertex:
      return t.name.empty() ? "vertex" : "vertex<" + t.name + ">";
    case TypeKind::Edge:
      return t.name.empty() ? "edge" : "edge<" + t.name + ">";
    case TypeKind::Row:
      return t.name.empty() ? "row" : "row<" + t.name + ">";
    case TypeKind::Tuple:
      return "tuple";
    case TypeKind::Set:
      return with_elem("set");
    case TypeKind::Bag:
      return with_elem("bag");
    case TypeKind::List:
      return with_elem("list");
    case TypeKind::Map:
      return "map<" + (t.elem ? sem_type_name(*t.elem) : std::string("?")) + ", " +
             (t.value ? sem_type_name(*t.value) : std::string("?")) + ">";
    case TypeKind::MapEntry:
      return "map entry";
    case TypeKind::VertexSet:
      return "vertex set";
    case TypeKind::Table:
      return t.name.empty() ? "table" : "table " + t.name;
  }
  return "?";
}

}  // namespace gsql
