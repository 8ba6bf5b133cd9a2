#include <doctest.h>

#include <regex>

#include "oracles.hpp"
#include "srcwb/error.hpp"
#include "srcwb/pathcontexts.hpp"
#include "test_support.hpp"

using namespace srcwb;

namespace {

PathConfig unlimited() {
  PathConfig c;
  c.limits = false;
  return c;
}

// Child-index distance at the LCA, from parent links.
int width_of(const Ast& ast, int a, int b) {
  std::vector<int> ca, cb;
  for (int x = a; x >= 0; x = ast.parent(x)) ca.push_back(x);
  for (int x = b; x >= 0; x = ast.parent(x)) cb.push_back(x);
  while (ca.size() > 1 && cb.size() > 1 && ca[ca.size() - 2] == cb[cb.size() - 2]) {
    ca.pop_back();
    cb.pop_back();
  }
  const int lca = ca.back();
  auto index_under = [&](int child) {
    int k = 0;
    for (int s : ast.children(lca)) {
      if (s == child) return k;
      ++k;
    }
    return -1;
  };
  return std::abs(index_under(cb[cb.size() - 2]) - index_under(ca[ca.size() - 2]));
}

std::vector<const MethodSource*> sample_methods() { return test::fixture_corpus().all_methods(); }

}  // namespace

TEST_CASE("without limits every terminal pair is returned with the oracle's path") {
  Rng rng(3);
  std::vector<MethodSource> generated;
  for (int i = 0; i < 40; ++i) generated.push_back(test::parse_single_method(test::random_class(rng)));
  std::vector<const MethodSource*> all = sample_methods();
  for (const MethodSource& m : generated) all.push_back(&m);
  for (const MethodSource* m : all) {
    CAPTURE(m->signature);
    const std::vector<RawPath> got = extract_paths(m->ast, unlimited());
    const std::vector<oracle::PairPath> want = oracle::all_pair_paths(m->ast);
    const std::size_t n = m->tokens.size();
    REQUIRE(got.size() == n * (n - 1) / 2);
    REQUIRE(want.size() == got.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
      REQUIRE(got[k].start == want[k].start);
      REQUIRE(got[k].end == want[k].end);
      REQUIRE(got[k].up == want[k].up);
      REQUIRE(got[k].lca_type == want[k].lca_type);
      REQUIRE(got[k].down == want[k].down);
    }
  }
}

TEST_CASE("limits keep exactly the pairs within length and width") {
  for (const MethodSource* m : sample_methods()) {
    CAPTURE(m->signature);
    PathConfig cfg;
    cfg.max_length = 6;
    cfg.max_width = 2;
    cfg.max_contexts = 1000000;
    const std::vector<RawPath> got = extract_paths(m->ast, cfg);
    std::vector<std::pair<int, int>> want, have;
    for (const oracle::PairPath& p : oracle::all_pair_paths(m->ast)) {
      const std::size_t len = p.up.size() + 1 + p.down.size();
      if (len <= 6 && width_of(m->ast, p.start, p.end) <= 2) want.emplace_back(p.start, p.end);
    }
    for (const RawPath& p : got) have.emplace_back(p.start, p.end);
    CHECK(have == want);
  }
}

TEST_CASE("sampling is seeded, bounded and order-preserving") {
  const MethodSource& m = test::fixture_corpus().method("calc/Metrics.java", "sumPositive(int[])");
  PathConfig cfg;
  cfg.max_contexts = 1000000;
  const std::vector<RawPath> full = extract_paths(m.ast, cfg);
  REQUIRE(full.size() > 20);
  cfg.max_contexts = 20;
  cfg.seed = 17;
  const std::vector<RawPath> a = extract_paths(m.ast, cfg);
  const std::vector<RawPath> b = extract_paths(m.ast, cfg);
  CHECK(a == b);
  CHECK(a.size() == 20);
  std::size_t pos = 0;
  for (const RawPath& p : a) {
    while (pos < full.size() && !(full[pos] == p)) ++pos;
    REQUIRE(pos < full.size());
    ++pos;
  }
  cfg.seed = 18;
  CHECK_FALSE(extract_paths(m.ast, cfg) == a);
  cfg.max_width = 0;
  CHECK_THROWS_AS(extract_paths(m.ast, cfg), Error);
}

TEST_CASE("Java string hash") {
  // Reference values from Java's String.hashCode.
  CHECK(java_string_hash("") == 0);
  CHECK(java_string_hash("hello") == 99162322);
  CHECK(java_string_hash("polygenelubricants") == INT32_MIN);
  CHECK(java_string_hash("Identifier^MethodDeclaration_Identifier") == -1706853820);
}

TEST_CASE("subtokens split camelCase, acronyms, digits and underscores") {
  CHECK(subtokens("getHTTPResponse_code2X") == std::vector<std::string>{"get", "http", "response", "code2", "x"});
  CHECK(subtokens("MAX_VALUE") == std::vector<std::string>{"max", "value"});
  CHECK(subtokens("x") == std::vector<std::string>{"x"});
  CHECK(subtokens("==").empty());
}

TEST_CASE("terminal escaping removes record delimiters") {
  CHECK(escape_terminal("\"a, b%\"") == "\"a%2C%20b%25\"");
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const std::string e = escape_terminal(test::random_bytes(rng, 20, true));
    REQUIRE(e.find(' ') == std::string::npos);
    REQUIRE(e.find(',') == std::string::npos);
  }
}

TEST_CASE("code2vec and code2seq records on a two-leaf tree") {
  MethodSource m;
  m.name = "fooBar";
  m.tokens = {Token{TokenKind::Identifier, "fooBar", 1, 1}, Token{TokenKind::StringLiteral, "\"x, y\"", 1, 8}};
  m.ast = Ast({AstNode{"MethodDeclaration", -1, 1, 1, -1}, AstNode{"Identifier", 0, 1, 1, 0},
               AstNode{"StringLiteral", 1, 1, 8, 0}});
  const std::vector<RawPath> paths = extract_paths(m.ast, {});
  REQUIRE(paths.size() == 1);
  CHECK(path_string(paths[0]) == "Identifier^MethodDeclaration_StringLiteral");
  // -1058546717 is Java's hashCode of the path string, computed independently.
  CHECK(to_c2vc(m, paths) == "fooBar fooBar,-1058546717,\"x%2C%20y\"");
  CHECK(to_c2sq(m, paths) == "foo|bar foo|bar,Identifier^MethodDeclaration_StringLiteral,x|y");
  PathConfig lower;
  lower.normalize_terminals = true;
  CHECK(to_c2vc(m, paths, lower).rfind("fooBar foobar,", 0) == 0);
}

TEST_CASE("code2vec records are well formed and hash their own paths") {
  const std::regex ctx(R"(^[^ ,]+,-?[0-9]+,[^ ,]+$)");
  for (const MethodSource* m : sample_methods()) {
    PathConfig cfg;
    cfg.seed = 5;
    const std::vector<RawPath> paths = extract_paths(m->ast, cfg);
    const std::string rec = to_c2vc(*m, paths, cfg);
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t sp = rec.find(' ', start);
      fields.push_back(rec.substr(start, sp - start));
      if (sp == std::string::npos) break;
      start = sp + 1;
    }
    REQUIRE(fields.size() == paths.size() + 1);
    CHECK(fields[0] == m->name);
    for (std::size_t k = 0; k < paths.size(); ++k) {
      REQUIRE(std::regex_match(fields[k + 1], ctx));
      const std::string hash = fields[k + 1].substr(fields[k + 1].find(',') + 1);
      CHECK(std::stol(hash) == java_string_hash(path_string(paths[k])));
    }
  }
}
