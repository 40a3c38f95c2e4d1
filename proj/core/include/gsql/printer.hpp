#pragma once

#include <string>

#include "gsql/ast.hpp"
#include "gsql/catalog.hpp"

namespace gsql {

// Canonical source text. Parsing the output yields the same tree (compare
// with ast_json); nested operands are parenthesized rather than relying on
// precedence.
std::string print_expr(const Expr& e);
std::string print_darpe(const Darpe& d);
std::string print_type(const TypeAst& t);
std::string print_block(const QueryBlock& b);
std::string print_ddl(const DdlStmt& stmt);
std::string print_query(const Query& q);
std::string print_program(const Program& p);

// Structural dump of the syntax tree as JSON, without source positions or
// checker annotations.
std::string ast_json(const Query& q, int indent = -1);
std::string ast_json(const Program& p, int indent = -1);
std::string ast_json(const Expr& e, int indent = -1);
std::string ast_json(const Darpe& d, int indent = -1);

}  // namespace gsql
