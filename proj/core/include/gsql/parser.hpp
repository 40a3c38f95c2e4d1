#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "gsql/ast.hpp"
#include "gsql/lexer.hpp"

namespace gsql {

// DDL statements and queries (CREATE QUERY, WITH ... BEGIN ... END, or a bare
// query block) in any order.
Program parse(const std::vector<Token>& tokens);
Program parse_program(std::string_view text);

// Exactly one query of any form.
std::unique_ptr<Query> parse_query(std::string_view text);

ExprPtr parse_expression(std::string_view text);
DarpePtr parse_darpe(std::string_view text);

}  // namespace gsql
