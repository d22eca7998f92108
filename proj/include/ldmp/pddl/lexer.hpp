#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ldmp/pddl/domain.hpp"

namespace ldmp::pddl {

struct Token {
  enum class Kind { LParen, RParen, Word, End };
  Kind kind;
  std::string text;
  SourceLocation loc;
};

/// Splits PDDL text into parens and words. ';' starts a comment.
/// Throws ParseError on characters outside the accepted alphabet.
std::vector<Token> tokenize(std::string_view text);

/// Parenthesized tree built from tokens.
struct SExpr {
  bool list = false;
  std::string word;
  std::vector<SExpr> items;
  SourceLocation loc;
};

SExpr read_sexpr(std::string_view text);

}  // namespace ldmp::pddl
