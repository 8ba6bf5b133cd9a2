#include <doctest.h>

#include "srcwb/error.hpp"
#include "srcwb/parser.hpp"
#include "srcwb/representations.hpp"
#include "test_support.hpp"

using namespace srcwb;

namespace {

std::string wrap(const std::string& body) {
  return "class K {\n    int f;\n    int g(int a, int b) {\n" + body + "\n    }\n}\n";
}

int parse_error_line(const std::string& source) {
  try {
    parse(source);
  } catch (const PositionedError& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    return e.line();
  }
  return -1;
}

}  // namespace

// ---- lexer -------------------------------------------------------------------

TEST_CASE("lexer classifies tokens and tracks positions") {
  const std::vector<Token> t = lex("x += 0x1F; // c\n  s = \"a, b\";\n/* c */ c = 'q' != null;");
  REQUIRE(t.size() == 14);
  CHECK(t[0] == Token{TokenKind::Identifier, "x", 1, 1});
  CHECK(t[1] == Token{TokenKind::Operator, "+=", 1, 3});
  CHECK(t[2] == Token{TokenKind::IntLiteral, "0x1F", 1, 6});
  CHECK(t[3] == Token{TokenKind::Separator, ";", 1, 10});
  CHECK(t[4] == Token{TokenKind::Identifier, "s", 2, 3});
  CHECK(t[6] == Token{TokenKind::StringLiteral, "\"a, b\"", 2, 7});
  CHECK(t[10] == Token{TokenKind::CharLiteral, "'q'", 3, 13});
  CHECK(t[11].is(TokenKind::Operator, "!="));
  CHECK(t[12].kind == TokenKind::NullLiteral);
}

TEST_CASE("lexer keyword and literal classes") {
  const std::vector<Token> t = lex("while true false 1.5e3 10L");
  CHECK(t[0].kind == TokenKind::Keyword);
  CHECK(t[1].kind == TokenKind::BoolLiteral);
  CHECK(t[2].kind == TokenKind::BoolLiteral);
  CHECK(t[3] == Token{TokenKind::IntLiteral, "1.5e3", 1, 18});
  CHECK(t[4] == Token{TokenKind::IntLiteral, "10L", 1, 24});
  CHECK(is_java_keyword("class"));
  CHECK_FALSE(is_java_keyword("true"));
}

TEST_CASE("lexer rejects illegal and unterminated input with a position") {
  auto lex_error = [](const std::string& src) -> std::pair<int, int> {
    try {
      lex(src);
    } catch (const PositionedError& e) {
      CHECK(e.kind() == ErrorKind::Lex);
      return {e.line(), e.col()};
    }
    return {-1, -1};
  };
  CHECK(lex_error("a = 1;\nb # c") == std::pair{2, 3});
  CHECK(lex_error("s = \"open").first == 1);
  CHECK(lex_error("x;\n/* never closed").first == 2);
  CHECK(lex_error("c = 'ab';") == std::pair{1, 5});
  CHECK(lex_error("c = '';").first == 1);
  CHECK(lex("'\\n' '\\u0041' '\\101' '\xc3\xa9'").size() == 4);
}

TEST_CASE("property: the lexer either tokenizes or throws a positioned error") {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const std::string s = test::random_bytes(rng, 40, i % 2 == 0);
    try {
      for (const Token& t : lex(s)) {
        REQUIRE(t.line >= 1);
        REQUIRE(t.col >= 1);
        REQUIRE_FALSE(t.lexeme.empty());
      }
    } catch (const PositionedError& e) {
      REQUIRE(e.kind() == ErrorKind::Lex);
    }
  }
}

// ---- parser ------------------------------------------------------------------

TEST_CASE("parser rejects constructs outside the subset") {
  CHECK(parse_error_line(wrap("        Runnable r = () -> a;")) == 4);
  CHECK(parse_error_line(wrap("        long x = (long) a;")) == 4);
  CHECK(parse_error_line(wrap("        try { a = 1; } finally { b = 2; }")) == 4);
  CHECK(parse_error_line(wrap("        switch (a) { }")) == 4);
  CHECK(parse_error_line(wrap("        while (a > 0) { break; }")) == 4);
  CHECK(parse_error_line(wrap("        for (int x : xs) { a = x; }")) == 4);
  CHECK(parse_error_line(wrap("        Object o = new Object() { };")) == 4);
  CHECK(parse_error_line("enum E { A, B }\n") == 1);
  CHECK(parse_error_line(wrap("        a = 1")) == 5);
}

TEST_CASE("parser collects declarations") {
  const CompilationUnit u = parse(
      "package a.b;\nimport java.util.List;\nimport static x.Y.z;\nimport q.*;\n"
      "public class P<T> extends Base implements I, J {\n"
      "    private List<String> names;\n    int[] xs, ys;\n"
      "    P(int n) { }\n"
      "    public <U> Map<String, U> get(List<U> us, int k) { return null; }\n"
      "}\ninterface I { int size(); }\n");
  CHECK(u.package_name == "a.b");
  REQUIRE(u.imports.size() == 3);
  CHECK(u.imports[1].is_static);
  CHECK(u.imports[2].wildcard);
  CHECK(u.imports[2].name == "q");
  REQUIRE(u.types.size() == 2);
  const TypeInfo& p = u.types[0];
  CHECK(p.superclass == "Base");
  CHECK(p.interfaces == std::vector<std::string>{"I", "J"});
  REQUIRE(p.fields.size() == 3);
  CHECK(p.fields[0] == FieldInfo{"names", "List", 6});
  CHECK(p.fields[2].type == "int[]");
  REQUIRE(p.methods.size() == 2);
  CHECK(p.methods[0].is_constructor);
  CHECK(p.methods[0].signature == "P(int)");
  CHECK(p.methods[1].signature == "get(List,int)");
  CHECK(p.methods[1].return_type == "Map");
  CHECK(u.types[1].is_interface);
  CHECK_FALSE(u.types[1].methods[0].has_body);
}

TEST_CASE("signatures round-trip") {
  CHECK(make_signature("f", {}) == "f()");
  CHECK(make_signature("f", {{"a", "int[]"}, {"b", "Map.Entry"}}) == "f(int[],Map.Entry)");
  Rng rng(11);
  const std::vector<std::string> types{"int", "String", "int[]", "Map.Entry", "char[][]", "List"};
  for (int i = 0; i < 200; ++i) {
    std::vector<ParamInfo> ps(rng.below(4));
    for (auto& p : ps) p.type = types[rng.below(types.size())];
    const std::string name = "m" + std::to_string(rng.below(1000));
    const ParsedSignature back = parse_signature(make_signature(name, ps));
    REQUIRE(back.name == name);
    REQUIRE(back.param_types.size() == ps.size());
    for (std::size_t k = 0; k < ps.size(); ++k) REQUIRE(back.param_types[k] == ps[k].type);
  }
  CHECK_THROWS_AS(parse_signature("f(int"), Error);
  CHECK_THROWS_AS(parse_signature("(int)"), Error);
}

TEST_CASE("slice_lines keeps interior terminators and drops the last one") {
  CHECK(slice_lines("a\nb\nc\n", 2, 3) == "b\nc");
  CHECK(slice_lines("a\r\nb\r\nc", 1, 2) == "a\r\nb");
  CHECK(slice_lines("a\nb", 2, 2) == "b");
  CHECK(slice_lines("a\n", 5, 6).empty());
}

TEST_CASE("method text spans the declaration lines and relexes to its tokens") {
  for (const MethodSource* m : test::fixture_corpus().all_methods()) {
    CAPTURE(m->signature);
    const int lines = static_cast<int>(std::count(m->text.begin(), m->text.end(), '\n')) + 1;
    CHECK(lines == m->end_line - m->start_line + 1);
    // Relexing the slice restarts at line 1; columns are unchanged.
    std::vector<Token> relexed = lex(m->text);
    for (Token& t : relexed) t.line += m->start_line - 1;
    CHECK(relexed == m->tokens);
  }
}

TEST_CASE("property: AST leaves are exactly the tokens in order") {
  Rng rng(808);
  auto check = [](const MethodSource& m) {
    const std::vector<int> leaves = m.ast.terminals();
    REQUIRE(leaves.size() == m.tokens.size());
    for (std::size_t k = 0; k < leaves.size(); ++k) {
      const AstNode& n = m.ast.node(leaves[k]);
      REQUIRE(n.token == static_cast<int>(k));
      REQUIRE(n.type == terminal_type(m.tokens[k].kind));
      REQUIRE(n.line == m.tokens[k].line);
    }
    for (int i = 1; i < static_cast<int>(m.ast.size()); ++i) {
      const int p = m.ast.parent(i);
      REQUIRE(p < i);
      REQUIRE(m.ast.subtree_end(i) <= m.ast.subtree_end(p));
    }
  };
  for (const MethodSource* m : test::fixture_corpus().all_methods()) check(*m);
  for (int i = 0; i < 200; ++i) check(test::parse_single_method(test::random_class(rng)));
}

// ---- representations ---------------------------------------------------------

TEST_CASE("representation names") {
  for (Repr r : all_reprs()) CHECK(parse_repr(to_string(r)) == r);
  CHECK_FALSE(parse_repr("tkna").has_value());
}

TEST_CASE("TKNA and TKNB renderings") {
  const std::vector<Token> t = lex("f(a, \"x, y\", ',');");
  CHECK(tokens_tkna(t) == "f ( a , \"x, y\" , ',' ) ;");
  CHECK(tokens_tknb(t) == "f,(,a,\",\",\"x<LITCOMMA> y\",\",\",'<LITCOMMA>',),;");
}

TEST_CASE("property: split_tknb inverts tokens_tknb") {
  Rng rng(99);
  const std::vector<std::string> pieces{"a", ",", "\"", " ", "x", "<", ">"};
  for (int i = 0; i < 300; ++i) {
    std::string src;
    const std::size_t n = 1 + rng.below(8);
    for (std::size_t k = 0; k < n; ++k) {
      switch (rng.below(4)) {
        case 0: src += "v" + std::to_string(k) + " "; break;
        case 1: src += ", "; break;
        case 2: {
          std::string lit;
          for (std::size_t c = rng.below(5); c > 0; --c) lit += pieces[rng.below(pieces.size())];
          std::string escaped;
          for (char ch : lit) {
            if (ch == '"') escaped += '\\';
            escaped += ch;
          }
          src += "\"" + escaped + "\" ";
          break;
        }
        default: src += "',' "; break;
      }
    }
    CAPTURE(src);
    const std::vector<Token> toks = lex(src);
    std::vector<std::string> lexemes;
    for (const Token& t : toks) lexemes.push_back(t.lexeme);
    REQUIRE(split_tknb(tokens_tknb(toks)) == lexemes);
  }
  for (const MethodSource* m : test::fixture_corpus().all_methods()) {
    std::vector<std::string> lexemes;
    for (const Token& t : m->tokens) lexemes.push_back(t.lexeme);
    CHECK(split_tknb(tokens_tknb(*m)) == lexemes);
  }
}

TEST_CASE("TEXT is the raw method text") {
  const MethodSource& m = test::fixture_corpus().method("demo/src/app/A.java", "helper(int)");
  CHECK(repr_text(m) ==
        "    int helper(int x) {\n        if (x > 0) {\n            return x * 2;\n        }\n"
        "        return -x;\n    }");
}
