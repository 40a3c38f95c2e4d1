#include "gsql/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace gsql {

namespace {

constexpr std::array kKeywords = {
    "ACCUM",   "ALL",      "AND",      "AS",     "ASC",       "BEGIN",         "BETWEEN",
    "BREAK",   "BY",       "CASE",     "CONTAINS", "CONTINUE", "CREATE",       "DESC",
    "DIRECTED", "DISCRIMINATOR", "DISTINCT", "DO", "EDGE",      "ELSE",          "END",
    "FALSE",   "FOR",      "FOREACH",  "FROM",   "GRAPH",     "GROUP",         "HAVING",
    "IF",      "IN",       "INTERSECT", "INTO",  "IS",        "KEY",           "LIKE",
    "LIMIT",   "MINUS",    "NOT",      "NULL",   "OR",        "ORDER",         "POST_ACCUM",
    "PRIMARY", "QUERY",    "RANGE",    "RETURN", "REVERSE",   "SELECT",        "THEN",
    "TRUE",    "UNDIRECTED", "UNION",  "VERTEX", "WHEN",      "WHERE",         "WHILE",
    "WITH",
};

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (i_ >= text_.size()) break;
      out.push_back(next());
    }
    out.push_back(Token{Tok::End, "", pos(), false});
    return out;
  }

 private:
  SourcePos pos() const { return SourcePos{line_, col_}; }

  char peek(std::size_t k = 0) const { return i_ + k < text_.size() ? text_[i_ + k] : '\0'; }

  void advance(std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i_ < text_.size(); ++k) {
      if (text_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++i_;
    }
  }

  void skip_space() {
    while (i_ < text_.size()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (i_ < text_.size() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        SourcePos start = pos();
        advance(2);
        while (i_ < text_.size() && !(peek() == '*' && peek(1) == '/')) advance();
        if (i_ >= text_.size()) fail(ErrorKind::Lex, "unterminated comment", start);
        advance(2);
      } else {
        break;
      }
    }
  }

  Token make(Tok kind, std::string text, SourcePos p) { return Token{kind, std::move(text), p, false}; }

  Token next() {
    SourcePos p = pos();
    char c = peek();
    if (ident_start(c)) return word(p);
    if (std::isdigit(static_cast<unsigned char>(c))) return number(p);
    if (c == '\'' || c == '"') return string_lit(p);
    if (c == '@') return accum(p);
    auto two = [&](char a, char b) { return c == a && peek(1) == b; };
    if (two('.', '.')) return advance(2), make(Tok::DotDot, "..", p);
    if (two('<', '=')) return advance(2), make(Tok::Le, "<=", p);
    if (two('>', '=')) return advance(2), make(Tok::Ge, ">=", p);
    if (two('<', '>')) return advance(2), make(Tok::Ne, "<>", p);
    if (two('!', '=')) return advance(2), make(Tok::Ne, "!=", p);
    if (two('=', '=')) return advance(2), make(Tok::EqEq, "==", p);
    if (two('+', '=')) return advance(2), make(Tok::PlusAssign, "+=", p);
    if (two('-', '>')) return advance(2), make(Tok::Arrow, "->", p);
    Tok kind;
    switch (c) {
      case '(':
        kind = Tok::LParen;
        break;
      case ')':
        kind = Tok::RParen;
        break;
      case '{':
        kind = Tok::LBrace;
        break;
      case '}':
        kind = Tok::RBrace;
        break;
      case '[':
        kind = Tok::LBracket;
        break;
      case ']':
        kind = Tok::RBracket;
        break;
      case ',':
        kind = Tok::Comma;
        break;
      case ';':
        kind = Tok::Semi;
        break;
      case ':':
        kind = Tok::Colon;
        break;
      case '.':
        kind = Tok::Dot;
        break;
      case '*':
        kind = Tok::Star;
        break;
      case '+':
        kind = Tok::Plus;
        break;
      case '-':
        kind = Tok::Minus;
        break;
      case '/':
        kind = Tok::Slash;
        break;
      case '%':
        kind = Tok::Percent;
        break;
      case '&':
        kind = Tok::Amp;
        break;
      case '|':
        kind = Tok::Pipe;
        break;
      case '<':
        kind = Tok::Lt;
        break;
      case '>':
        kind = Tok::Gt;
        break;
      case '=':
        kind = Tok::Eq;
        break;
      default:
        fail(ErrorKind::Lex, std::string("illegal character '") + c + "'", p);
    }
    advance();
    return make(kind, std::string(1, c), p);
  }

  Token word(SourcePos p) {
    std::size_t start = i_;
    while (ident_char(peek())) advance();
    std::string_view w = text_.substr(start, i_ - start);
    std::string up = upper(w);
    // POST-ACCUM is the hyphenated spelling of POST_ACCUM.
    if (up == "POST" && peek() == '-') {
      std::string_view rest = text_.substr(i_ + 1, 5);
      if (upper(rest) == "ACCUM" && !ident_char(i_ + 6 < text_.size() ? text_[i_ + 6] : '\0')) {
        advance(6);
        return make(Tok::Keyword, "POST_ACCUM", p);
      }
    }
    if (is_keyword(up)) return make(Tok::Keyword, up, p);
    return make(Tok::Ident, std::string(w), p);
  }

  Token number(SourcePos p) {
    std::size_t start = i_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    bool is_float = false;
    // "2..3" is INT DOTDOT INT.
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      is_float = true;
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (std::isdigit(static_cast<unsigned char>(peek(1))) ||
         ((peek(1) == '-' || peek(1) == '+') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
      is_float = true;
      advance(2);
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    if (ident_start(peek())) fail(ErrorKind::Lex, "malformed number", p);
    return make(is_float ? Tok::Float : Tok::Int, std::string(text_.substr(start, i_ - start)), p);
  }

  Token string_lit(SourcePos p) {
    char quote = peek();
    advance();
    std::string out;
    while (true) {
      if (i_ >= text_.size()) fail(ErrorKind::Lex, "unterminated string", p);
      char c = peek();
      if (c == quote) {
        if (peek(1) == quote) {
          out += quote;
          advance(2);
          continue;
        }
        advance();
        break;
      }
      if (c == '\\' && i_ + 1 < text_.size()) {
        char e = peek(1);
        advance(2);
        switch (e) {
          case 'n':
            out += '\n';
            break;
          case 't':
            out += '\t';
            break;
          default:
            out += e;
        }
        continue;
      }
      if (c == '\n') fail(ErrorKind::Lex, "unterminated string", p);
      out += c;
      advance();
    }
    return make(Tok::String, std::move(out), p);
  }

  Token accum(SourcePos p) {
    bool global = peek(1) == '@';
    advance(global ? 2 : 1);
    if (!ident_start(peek())) fail(ErrorKind::Lex, "expected accumulator name after '@'", p);
    std::size_t start = i_;
    while (ident_char(peek())) advance();
    Token t = make(global ? Tok::GlobalAcc : Tok::VertexAcc,
                   std::string(text_.substr(start, i_ - start)), p);
    if (peek() == '\'') {
      t.primed = true;
      advance();
    }
    return t;
  }

  std::string_view text_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::string_view tok_name(Tok t) {
  switch (t) {
    case Tok::End:
      return "end of input";
    case Tok::Ident:
      return "identifier";
    case Tok::Keyword:
      return "keyword";
    case Tok::Int:
      return "integer";
    case Tok::Float:
      return "number";
    case Tok::String:
      return "string";
    case Tok::GlobalAcc:
      return "global accumulator";
    case Tok::VertexAcc:
      return "vertex accumulator";
    case Tok::LParen:
      return "'('";
    case Tok::RParen:
      return "')'";
    case Tok::LBrace:
      return "'{'";
    case Tok::RBrace:
      return "'}'";
    case Tok::LBracket:
      return "'['";
    case Tok::RBracket:
      return "']'";
    case Tok::Comma:
      return "','";
    case Tok::Semi:
      return "';'";
    case Tok::Colon:
      return "':'";
    case Tok::Dot:
      return "'.'";
    case Tok::DotDot:
      return "'..'";
    case Tok::Star:
      return "'*'";
    case Tok::Plus:
      return "'+'";
    case Tok::Minus:
      return "'-'";
    case Tok::Slash:
      return "'/'";
    case Tok::Percent:
      return "'%'";
    case Tok::Amp:
      return "'&'";
    case Tok::Pipe:
      return "'|'";
    case Tok::Lt:
      return "'<'";
    case Tok::Gt:
      return "'>'";
    case Tok::Le:
      return "'<='";
    case Tok::Ge:
      return "'>='";
    case Tok::Eq:
      return "'='";
    case Tok::EqEq:
      return "'=='";
    case Tok::Ne:
      return "'<>'";
    case Tok::PlusAssign:
      return "'+='";
    case Tok::Arrow:
      return "'->'";
  }
  return "?";
}

bool is_keyword(std::string_view word) {
  std::string up = upper(word);
  return std::find(kKeywords.begin(), kKeywords.end(), up) != kKeywords.end();
}

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

}  // namespace gsql
