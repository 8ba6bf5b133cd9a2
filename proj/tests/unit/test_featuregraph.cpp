#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "srcwb/callgraph.hpp"
#include "srcwb/error.hpp"
#include "srcwb/featuregraph.hpp"
#include "test_support.hpp"

using namespace srcwb;

namespace {

std::set<Edge> flow_edges(const FeatureGraph& g) {
  std::set<Edge> out;
  for (const Edge& e : g.edges) {
    if (e.type == EdgeType::LastRead || e.type == EdgeType::LastWrite) out.insert(e);
  }
  return out;
}

std::string describe(const FeatureGraph& g, const Edge& e) {
  auto name = [&](int n) {
    const GraphNode& x = g.nodes[static_cast<std::size_t>(n)];
    return x.token + "@" + std::to_string(x.line) + ":" + std::to_string(x.col);
  };
  return std::string(to_string(e.type)) + " " + name(e.src) + " -> " + name(e.dst);
}

void check_against_oracle(const MethodSource& m) {
  const FeatureGraph g = build_feature_graph(m);
  const std::set<Edge> got = flow_edges(g);
  const std::set<Edge> want = oracle::brute_force_dataflow(m, g, 2);
  for (const Edge& e : got) {
    if (!want.count(e)) FAIL_CHECK("extra " << describe(g, e));
  }
  for (const Edge& e : want) {
    if (!got.count(e)) FAIL_CHECK("missing " << describe(g, e));
  }
}

int terminal_at(const FeatureGraph& g, const std::string& token, int line) {
  for (std::size_t i = 0; i < g.ast_size; ++i) {
    if (g.nodes[i].has_token && g.nodes[i].token == token && g.nodes[i].line == line) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

bool has_edge(const FeatureGraph& g, int src, int dst, EdgeType t) {
  return std::binary_search(g.edges.begin(), g.edges.end(), Edge{src, dst, t});
}

}  // namespace

TEST_CASE("data flow equals brute-force path enumeration on every fixture method") {
  for (const MethodSource* m : test::fixture_corpus().all_methods()) {
    CAPTURE(m->file_relpath);
    CAPTURE(m->signature);
    check_against_oracle(*m);
  }
}

TEST_CASE("one unrolled iteration misses loop-carried dependencies") {
  // `a` read by `t = a + b` at the top of the body is reached by `a = b`
  // from the previous iteration only after two trips.
  const MethodSource& m = test::fixture_corpus().method("flow/Flow.java", "fib(int)");
  const FeatureGraph g = build_feature_graph(m);
  const std::set<Edge> k1 = oracle::brute_force_dataflow(m, g, 1);
  const std::set<Edge> k2 = oracle::brute_force_dataflow(m, g, 2);
  const std::set<Edge> k3 = oracle::brute_force_dataflow(m, g, 3);
  CHECK(k1.size() < k2.size());
  CHECK(k2 == k3);
  CHECK(k2 == flow_edges(g));
}

TEST_CASE("property: data flow equals the brute-force oracle on generated acyclic methods") {
  Rng rng(4242);
  test::GenOptions o;
  o.loops = false;
  for (int i = 0; i < 250; ++i) {
    const std::string src = test::random_class(rng, o);
    CAPTURE(src);
    const MethodSource m = test::parse_single_method(src);
    const FeatureGraph g = build_feature_graph(m);
    REQUIRE(flow_edges(g) == oracle::brute_force_dataflow(m, g, 0));
  }
}

TEST_CASE("property: data flow equals the unrolled oracle on generated loops") {
  Rng rng(9001);
  test::GenOptions o;
  o.max_depth = 2;
  o.max_stmts = 3;
  for (int i = 0; i < 200; ++i) {
    const std::string src = test::random_class(rng, o);
    CAPTURE(src);
    const MethodSource m = test::parse_single_method(src);
    const FeatureGraph g = build_feature_graph(m);
    REQUIRE(flow_edges(g) == oracle::brute_force_dataflow(m, g, 3));
  }
}

TEST_CASE("swap threads reads and writes through the temporary") {
  const MethodSource& m = test::fixture_corpus().method("flow/Flow.java", "swap(int,int)");
  const FeatureGraph g = build_feature_graph(m);
  const int t_decl = terminal_at(g, "t", 7);
  const int a_read = terminal_at(g, "a", 7);
  const int a_write = terminal_at(g, "a", 8);
  const int b_read = terminal_at(g, "b", 8);
  const int t_read = terminal_at(g, "t", 9);
  REQUIRE(t_decl >= 0);
  REQUIRE(t_read >= 0);
  CHECK(has_edge(g, t_read, t_decl, EdgeType::LastWrite));
  CHECK(has_edge(g, a_write, a_read, EdgeType::LastRead));
  CHECK(has_edge(g, t_decl, a_read, EdgeType::ComputedFrom));
  CHECK(has_edge(g, a_write, b_read, EdgeType::ComputedFrom));
}

TEST_CASE("NextToken is one source-ordered path over all terminals") {
  for (const MethodSource* m : test::fixture_corpus().all_methods()) {
    CAPTURE(m->signature);
    const FeatureGraph g = build_feature_graph(*m);
    const std::vector<Edge> next = g.edges_of(EdgeType::NextToken);
    REQUIRE(g.token_order.size() == m->tokens.size());
    REQUIRE(next.size() + 1 == g.token_order.size());
    std::map<int, int> succ, indeg;
    for (const Edge& e : next) {
      REQUIRE(!succ.count(e.src));
      succ[e.src] = e.dst;
      ++indeg[e.dst];
    }
    int cur = g.token_order.front();
    CHECK(!indeg.count(cur));
    std::size_t k = 0;
    std::pair<int, int> prev{0, 0};
    while (true) {
      const GraphNode& n = g.nodes[static_cast<std::size_t>(cur)];
      const std::pair<int, int> pos{n.line, n.col};
      CHECK(prev < pos);
      prev = pos;
      ++k;
      auto it = succ.find(cur);
      if (it == succ.end()) break;
      cur = it->second;
    }
    CHECK(k == g.token_order.size());
  }
}

TEST_CASE("filtering to Child edges reproduces the AST graph") {
  for (const MethodSource* m : test::fixture_corpus().all_methods()) {
    CAPTURE(m->signature);
    const FeatureGraph full = build_feature_graph(*m);
    const FeatureGraph asts = ast_graph(*m);
    CHECK(matches_ast_view(filter_edges(full, {EdgeType::Child}), asts));
    CHECK_FALSE(matches_ast_view(full, asts));
  }
  CHECK_THROWS_AS(filter_edges(ast_graph(*test::fixture_corpus().all_methods().front()), {}), Error);
}

TEST_CASE("guards point at the condition of the enclosing if") {
  const MethodSource& m = test::fixture_corpus().method("flow/Flow.java", "branch(int)");
  const FeatureGraph g = build_feature_graph(m);
  int cond = -1;
  for (std::size_t i = 0; i < g.ast_size; ++i) {
    if (g.nodes[i].type == "Condition") cond = static_cast<int>(i);
  }
  REQUIRE(cond >= 0);
  const int x_then = terminal_at(g, "x", 16);
  const int x_else = terminal_at(g, "x", 18);
  CHECK(has_edge(g, x_then, cond, EdgeType::GuardedBy));
  CHECK(has_edge(g, x_else, cond, EdgeType::GuardedByNegation));
  CHECK_FALSE(has_edge(g, x_else, cond, EdgeType::GuardedBy));
  // `y` is not mentioned by the condition.
  CHECK_FALSE(has_edge(g, terminal_at(g, "y", 16), cond, EdgeType::GuardedBy));
}

TEST_CASE("every return keyword points back to the declaration") {
  const MethodSource& m = test::fixture_corpus().method("flow/Flow.java", "early(int)");
  const FeatureGraph g = build_feature_graph(m);
  const std::vector<Edge> ret = g.edges_of(EdgeType::ReturnTo);
  REQUIRE(ret.size() == 2);
  for (const Edge& e : ret) {
    CHECK(e.dst == 0);
    CHECK(g.nodes[static_cast<std::size_t>(e.src)].token == "return");
  }
}

TEST_CASE("field declarations become synthetic writes at entry") {
  const MethodSource& m = test::fixture_corpus().method("flow/Flow.java", "accumulate(int)");
  const FeatureGraph g = build_feature_graph(m);
  REQUIRE(g.nodes.size() == g.ast_size + 1);
  const GraphNode& field = g.nodes.back();
  CHECK(field.type == kFieldDeclNode);
  CHECK(field.token == "acc");
  const int synth = static_cast<int>(g.ast_size);
  const int compound = terminal_at(g, "acc", 45);
  CHECK(has_edge(g, compound, synth, EdgeType::LastWrite));
}

TEST_CASE("FormalArgName links arguments to the resolved callee's parameters") {
  const auto& c = test::fixture_corpus();
  const CallGraph cg = build_callgraph(c.catalog, c.files);
  const MethodSource& caller = c.method("demo/src/app/A.java", "main(int)");
  const FeatureGraph g = build_feature_graph(caller, make_formal_resolver(cg, caller, c.methods));
  std::vector<std::string> formals;
  for (const Edge& e : g.edges_of(EdgeType::FormalArgName)) {
    formals.push_back(g.nodes[static_cast<std::size_t>(e.dst)].token);
  }
  std::sort(formals.begin(), formals.end());
  // helper(n) -> x; B.util(h, n) -> a, b; C.fmt(u) -> v. String.format is API.
  CHECK(formals == std::vector<std::string>{"a", "b", "v", "x"});
}

TEST_CASE("graph serialization round-trips") {
  const auto& c = test::fixture_corpus();
  for (const MethodSource* m : c.all_methods()) {
    const FeatureGraph g = build_feature_graph(*m);
    CHECK(deserialize_graph(serialize_graph(g)) == g);
  }
  CHECK_THROWS_AS(deserialize_graph("{\"nodes\": 3}"), PositionedError);
  CHECK_THROWS_AS(deserialize_graph("not json"), PositionedError);
}

TEST_CASE("edge type names round-trip") {
  for (EdgeType t : all_edge_types()) CHECK(parse_edge_type(to_string(t)) == t);
  CHECK_THROWS_AS(parse_edge_type("Sibling"), Error);
}
