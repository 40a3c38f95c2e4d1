#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gsql/value.hpp"

namespace gsql {

enum class Tok {
  End,
  Ident,
  Keyword,
  Int,
  Float,
  String,
  GlobalAcc,  // @@name
  VertexAcc,  // @name
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Semi,
  Colon,
  Dot,
  DotDot,
  Star,
  Plus,
  Minus,
  Slash,
  Percent,
  Amp,
  Pipe,
  Lt,
  Gt,
  Le,
  Ge,
  Eq,
  EqEq,
  Ne,
  PlusAssign,
  Arrow,
};

std::string_view tok_name(Tok t);

struct Token {
  Tok kind = Tok::End;
  // Keywords are upper-cased; accumulator tokens hold the bare name.
  std::string text;
  SourcePos pos;
  // Accumulator name immediately followed by a prime.
  bool primed = false;
};

bool is_keyword(std::string_view word);

// The stream always ends with a Tok::End token.
std::vector<Token> tokenize(std::string_view text);

}  // namespace gsql
