#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace srcwb {

enum class TokenKind {
  Keyword,
  Identifier,
  IntLiteral,  // every numeric literal, including decimal and suffixed forms
  StringLiteral,
  CharLiteral,
  BoolLiteral,
  NullLiteral,
  Operator,
  Separator,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string lexeme;
  int line;  // 1-based
  int col;   // 1-based, counted in bytes

  bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
  bool is_literal() const {
    return kind == TokenKind::IntLiteral || kind == TokenKind::StringLiteral ||
           kind == TokenKind::CharLiteral || kind == TokenKind::BoolLiteral ||
           kind == TokenKind::NullLiteral;
  }

  bool operator==(const Token&) const = default;
};

/// Tokenizes Java-like source. Comments and whitespace are dropped;
/// annotations come out as '@' followed by identifiers. Throws
/// PositionedError(Lex) on illegal characters and unterminated literals or
/// comments.
std::vector<Token> lex(std::string_view source);

bool is_java_keyword(std::string_view word);

}  // namespace srcwb
