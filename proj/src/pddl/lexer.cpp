#include "ldmp/pddl/lexer.hpp"

#include <cctype>

namespace ldmp::pddl {

namespace {

bool word_char(char c) {
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  switch (c) {
    case '-': case '_': case '?': case ':': case '.': case '=': case '<': case '>': case '+':
    case '*': case '/':
      return true;
    default:
      return false;
  }
}

}  // namespace

ParseError::ParseError(const std::string& msg, SourceLocation loc)
    : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + msg),
      msg_(msg),
      loc_(loc) {}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&] {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == ';') {
      while (i < text.size() && text[i] != '\n') advance();
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    SourceLocation loc{line, col};
    if (c == '(' || c == ')') {
      out.push_back({c == '(' ? Token::Kind::LParen : Token::Kind::RParen, std::string(1, c), loc});
      advance();
      continue;
    }
    if (!word_char(c)) {
      std::string shown = (static_cast<unsigned char>(c) < 32 || static_cast<unsigned char>(c) > 126)
                              ? "byte " + std::to_string(static_cast<unsigned char>(c))
                              : std::string("'") + c + "'";
      throw ParseError("unexpected character " + shown, loc);
    }
    std::size_t b = i;
    while (i < text.size() && word_char(text[i])) advance();
    out.push_back({Token::Kind::Word, std::string(text.substr(b, i - b)), loc});
  }
  out.push_back({Token::Kind::End, "", {line, col}});
  return out;
}

SExpr read_sexpr(std::string_view text) {
  const auto toks = tokenize(text);
  std::size_t pos = 0;
  int depth = 0;
  auto parse = [&](auto&& self) -> SExpr {
    const Token& t = toks[pos];
    if (depth > 200) throw ParseError("nesting too deep", t.loc);
    if (t.kind == Token::Kind::End) throw ParseError("unexpected end of input", t.loc);
    if (t.kind == Token::Kind::RParen) throw ParseError("unexpected ')'", t.loc);
    ++pos;
    if (t.kind == Token::Kind::Word) return SExpr{false, t.text, {}, t.loc};
    SExpr e{true, "", {}, t.loc};
    ++depth;
    while (toks[pos].kind != Token::Kind::RParen) {
      if (toks[pos].kind == Token::Kind::End) throw ParseError("unclosed '('", t.loc);
      e.items.push_back(self(self));
    }
    ++pos;
    --depth;
    return e;
  };
  SExpr root = parse(parse);
  if (toks[pos].kind != Token::Kind::End) throw ParseError("trailing input", toks[pos].loc);
  return root;
}

}  // namespace ldmp::pddl
