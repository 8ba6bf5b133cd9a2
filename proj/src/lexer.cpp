#include "srcwb/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "srcwb/error.hpp"

namespace srcwb {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::IntLiteral: return "int_literal";
    case TokenKind::StringLiteral: return "string_literal";
    case TokenKind::CharLiteral: return "char_literal";
    case TokenKind::BoolLiteral: return "bool_literal";
    case TokenKind::NullLiteral: return "null_literal";
    case TokenKind::Operator: return "operator";
    case TokenKind::Separator: return "separator";
  }
  return "unknown";
}

namespace {

constexpr std::array<std::string_view, 50> kKeywords = {
    "abstract", "assert",     "boolean",   "break",      "byte",      "case",
    "catch",    "char",       "class",     "const",      "continue",  "default",
    "do",       "double",     "else",      "enum",       "extends",   "final",
    "finally",  "float",      "for",       "goto",       "if",        "implements",
    "import",   "instanceof", "int",       "interface",  "long",      "native",
    "new",      "package",    "private",   "protected",  "public",    "return",
    "short",    "static",     "strictfp",  "super",      "switch",    "synchronized",
    "this",     "throw",      "throws",    "transient",  "try",       "void",
    "volatile", "while"};

// Longest first so that maximal munch is a linear scan.
constexpr std::array<std::string_view, 38> kOperators = {
    ">>>=", "<<=", ">>=", ">>>", "==", ">=", "<=", "!=", "&&", "||", "++", "--", "<<",
    ">>",   "+=",  "-=",  "*=",  "/=", "&=", "|=", "^=", "%=", "->", "=",  ">",  "<",
    "!",    "~",   "?",   ":",   "+",  "-",  "*",  "/",  "&",  "|",  "^",  "%"};

constexpr std::array<std::string_view, 11> kSeparators = {"...", "::", "(", ")", "{", "}",
                                                          "[",   "]",  ";", ",", "@"};

bool ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}
bool ident_part(unsigned char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(unsigned char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (skip_trivia(), pos_ < src_.size()) {
      out.push_back(next());
    }
    return out;
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        int line = line_, col = col_;
        advance(2);
        while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
        if (pos_ >= src_.size()) {
          throw PositionedError(ErrorKind::Lex, line, col, "unterminated block comment");
        }
        advance(2);
      } else {
        return;
      }
    }
  }

  Token make(TokenKind kind, std::size_t start, int line, int col) {
    return Token{kind, std::string(src_.substr(start, pos_ - start)), line, col};
  }

  Token next() {
    const std::size_t start = pos_;
    const int line = line_, col = col_;
    const auto c = static_cast<unsigned char>(peek());

    if (ident_start(c)) {
      while (pos_ < src_.size() && ident_part(static_cast<unsigned char>(peek()))) advance();
      Token t = make(TokenKind::Identifier, start, line, col);
      if (t.lexeme == "true" || t.lexeme == "false") {
        t.kind = TokenKind::BoolLiteral;
      } else if (t.lexeme == "null") {
        t.kind = TokenKind::NullLiteral;
      } else if (is_java_keyword(t.lexeme)) {
        t.kind = TokenKind::Keyword;
      }
      return t;
    }
    if (digit(c) || (c == '.' && digit(static_cast<unsigned char>(peek(1))))) {
      lex_number();
      return make(TokenKind::IntLiteral, start, line, col);
    }
    if (c == '"' || c == '\'') {
      lex_quoted(static_cast<char>(c), line, col);
      return make(c == '"' ? TokenKind::StringLiteral : TokenKind::CharLiteral, start, line,
                  col);
    }
    for (std::string_view sep : kSeparators) {
      if (src_.substr(pos_, sep.size()) == sep) {
        advance(sep.size());
        return make(TokenKind::Separator, start, line, col);
      }
    }
    if (c == '.') {
      advance();
      return make(TokenKind::Separator, start, line, col);
    }
    for (std::string_view op : kOperators) {
      if (src_.substr(pos_, op.size()) == op) {
        advance(op.size());
        return make(TokenKind::Operator, start, line, col);
      }
    }
    throw PositionedError(ErrorKind::Lex, line, col,
                          "illegal character '" + std::string(1, static_cast<char>(c)) + "'");
  }

  void lex_number() {
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X' || peek(1) == 'b' || peek(1) == 'B')) {
      advance(2);
      while (std::isxdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
    } else {
      while (digit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      if (peek() == '.' && digit(static_cast<unsigned char>(peek(1)))) {
        advance();
        while (digit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      } else if (peek() == '.' && !ident_start(static_cast<unsigned char>(peek(1))) &&
                 peek(1) != '.') {
        advance();  // "1." form
      }
      if (peek() == 'e' || peek() == 'E') {
        std::size_t k = 1;
        if (peek(1) == '+' || peek(1) == '-') k = 2;
        if (digit(static_cast<unsigned char>(peek(k)))) {
          advance(k);
          while (digit(static_cast<unsigned char>(peek()))) advance();
        }
      }
    }
    char s = peek();
    if (s == 'l' || s == 'L' || s == 'f' || s == 'F' || s == 'd' || s == 'D') advance();
    if (ident_part(static_cast<unsigned char>(peek()))) {
      throw PositionedError(ErrorKind::Lex, line_, col_, "malformed numeric literal");
    }
  }

  // A character literal holds exactly one character or escape sequence.
  void lex_quoted(char quote, int line, int col) {
    advance();
    int units = 0;
    while (true) {
      if (pos_ >= src_.size() || peek() == '\n') {
        throw PositionedError(ErrorKind::Lex, line, col,
                              quote == '"' ? "unterminated string literal"
                                           : "unterminated character literal");
      }
      char ch = peek();
      if (ch == '\\') {
        skip_escape();
        ++units;
        continue;
      }
      advance();
      if (ch == quote) break;
      if ((static_cast<unsigned char>(ch) & 0xC0) != 0x80) ++units;  // UTF-8 continuation bytes

    }
    if (quote == '\'' && units != 1) {
      throw PositionedError(ErrorKind::Lex, line, col, "malformed character literal");
    }
  }

  void skip_escape() {
    advance();
    if (pos_ >= src_.size() || peek() == '\n') return;
    const char e = peek();
    advance();
    auto octal = [&] { return pos_ < src_.size() && peek() >= '0' && peek() <= '7'; };
    if (e == 'u') {
      while (pos_ < src_.size() && peek() == 'u') advance();
      for (int k = 0; k < 4 && pos_ < src_.size() && std::isxdigit(static_cast<unsigned char>(peek())); ++k) {
        advance();
      }
    } else if (e >= '0' && e <= '7') {
      for (int k = 0; k < (e <= '3' ? 2 : 1) && octal(); ++k) advance();
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

bool is_java_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> lex(std::string_view source) { return Lexer(source).run(); }

}  // namespace srcwb
