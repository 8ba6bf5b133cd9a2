#include <doctest.h>

#include <algorithm>
#include <tuple>

#include "hand_tables.hpp"
#include "oracles.hpp"
#include "srcwb/callgraph.hpp"
#include "srcwb/csv.hpp"
#include "srcwb/error.hpp"
#include "test_support.hpp"

using namespace srcwb;

namespace {

const CallGraph& fixture_graph() {
  static const CallGraph g = [] {
    const auto& c = test::fixture_corpus();
    return build_callgraph(c.catalog, c.files);
  }();
  return g;
}

EntityId id_of(const std::string& file, const std::string& sig) {
  return test::fixture_corpus().method(file, sig).method_id;
}

}  // namespace

TEST_CASE("call graph matches the hand-traced table") {
  const auto& c = test::fixture_corpus();
  using Key = std::tuple<EntityId, std::string, CallType>;
  std::map<Key, int> want, got;
  for (const test::HandCall& e : test::kHandCalls) want[{id_of(e.file, e.caller), e.callee, e.type}] += e.count;
  for (const CallEdge& e : fixture_graph().edges()) ++got[{e.caller, e.callee_signature, e.call_type}];
  for (const auto& [k, n] : got) {
    CAPTURE(c.catalog.find_method(std::get<0>(k))->method_signature);
    CAPTURE(std::get<1>(k));
    CHECK(want[k] == n);
  }
  CHECK(got.size() == want.size());
  CHECK(call_type_counts(fixture_graph()) == std::array<std::size_t, 4>{17, 8, 11, 17});
}

TEST_CASE("resolved callees agree with the metadata classification") {
  const auto& c = test::fixture_corpus();
  for (const CallEdge& e : fixture_graph().edges()) {
    CHECK(e.resolved() == (e.call_type != CallType::API));
    if (!e.resolved()) continue;
    CHECK(classify_call(c.catalog, e.caller, e.callee) == e.call_type);
    const MethodMeta* callee = c.catalog.find_method(e.callee);
    REQUIRE(callee);
    CHECK(e.callee_name() == callee->method_name);
  }
}

TEST_CASE("call sites point at the method name or created type") {
  const auto& c = test::fixture_corpus();
  const EntityId main = id_of("demo/src/app/A.java", "main(int)");
  // int u = B.util(h, n);  on line 10, `util` at column 19.
  const CallEdge* e = fixture_graph().find_site(main, 10, 19);
  REQUIRE(e);
  CHECK(e->callee_signature == "B.util(int,int)");
  const EntityId report = id_of("shapes/src/app/Main.java", "report()");
  std::size_t ctors = 0;
  for (std::size_t i : fixture_graph().outgoing(report)) {
    const CallEdge& x = fixture_graph().edges()[i];
    if (!x.is_constructor()) continue;
    ++ctors;
    const MethodSource& m = *c.methods.at(report);
    const std::string type = x.callee_signature.substr(0, x.callee_signature.find('.'));
    bool found = false;
    for (const Token& t : m.tokens) found |= t.line == x.line && t.col == x.col && t.lexeme == type;
    CHECK(found);
  }
  CHECK(ctors == 3);
}

TEST_CASE("excluding constructors drops exactly the constructor sites") {
  const auto& c = test::fixture_corpus();
  CallGraphOptions o;
  o.include_constructors = false;
  const CallGraph g = build_callgraph(c.catalog, c.files, o);
  std::size_t ctors = 0;
  for (const CallEdge& e : fixture_graph().edges()) ctors += e.is_constructor();
  CHECK(ctors == 6);
  CHECK(g.edges().size() + ctors == fixture_graph().edges().size());
  for (const CallEdge& e : g.edges()) CHECK_FALSE(e.is_constructor());
}

TEST_CASE("distribution sums to one and rejects empty graphs") {
  const std::array<double, 4> d = classify_distribution(fixture_graph());
  CHECK(d[0] == doctest::Approx(17.0 / 53));
  CHECK(d[3] == doctest::Approx(17.0 / 53));
  CHECK(d[0] + d[1] + d[2] + d[3] == doctest::Approx(1.0));
  CHECK_THROWS_AS(classify_distribution(CallGraph{}), Error);
}

TEST_CASE("connectivity properties") {
  const auto& c = test::fixture_corpus();
  PropertyStore store(c.catalog);
  connectivity_props(fixture_graph(), c.catalog, store);
  auto value = [&](const char* key, const char* file, const char* sig) {
    return std::get<std::int64_t>(store.table(key).at(id_of(file, sig)));
  };
  CHECK(value("NUCC", "textutil/src/text/Words.java", "banner(String)") == 5);
  CHECK(value("NMLC", "textutil/src/text/Words.java", "banner(String)") == 1);
  CHECK(value("NMNC", "textutil/src/text/Words.java", "banner(String)") == 6);
  CHECK(value("NUPC", "textutil/src/text/Words.java", "banner(String)") == 0);
  CHECK(value("NUPC", "textutil/src/util/Strings.java", "repeat(String,int)") == 2);
  CHECK(value("NUCC", "shapes/src/app/Main.java", "report()") == 5);
  CHECK(value("NMLC", "shapes/src/app/Main.java", "report()") == 2);
  CHECK(value("NMNC", "shapes/src/app/Main.java", "report()") == 7);
  CHECK(value("NUPC", "shapes/src/geo/Measurable.java", "area()") == 2);
  CHECK(value("NUPC", "shapes/src/geo/Circle.java", "Circle(double)") == 3);
  for (const char* key : {"NUPC", "NUCC", "NMLC", "NMNC"}) CHECK(store.table(key).size() == 60);
}

TEST_CASE("n-hop context") {
  const auto& c = test::fixture_corpus();
  const EntityId main = id_of("demo/src/app/A.java", "main(int)");
  const ContextBundle down = n_hop_context(fixture_graph(), c.catalog, main, 2, Direction::Callees);
  REQUIRE(down.hop_sets.size() == 3);
  CHECK(down.hop_sets[0] == std::set<EntityId>{main});
  CHECK(down.hop_sets[1] == std::set<EntityId>{main, id_of("demo/src/app/A.java", "helper(int)"),
                                               id_of("demo/src/app/B.java", "util(int,int)"),
                                               id_of("demo/src/lib/C.java", "fmt(int)")});
  std::set<EntityId> two = down.hop_sets[1];
  two.insert(id_of("demo/src/lib/C.java", "pad(String,int)"));
  CHECK(down.hop_sets[2] == two);

  const EntityId set_name = id_of("shapes/src/geo/Shape.java", "setName(String)");
  const ContextBundle up = n_hop_context(fixture_graph(), c.catalog, set_name, 2, Direction::Callers);
  CHECK(up.hop_sets[2] == std::set<EntityId>{set_name, id_of("shapes/src/geo/Circle.java", "Circle(double)"),
                                             id_of("shapes/src/geo/Square.java", "Square(double)"),
                                             id_of("shapes/src/app/Main.java", "labels()"),
                                             id_of("shapes/src/app/Main.java", "report()"),
                                             id_of("shapes/src/geo/Circle.java", "scaled(double)")});
  CHECK_THROWS_AS(n_hop_context(fixture_graph(), c.catalog, assign_id(EntityKind::Method, "x"), 1,
                                Direction::Callees),
                  Error);
}

TEST_CASE("property: hop sets grow monotonically and stabilize") {
  const auto& c = test::fixture_corpus();
  for (const MethodMeta& m : c.catalog.methods()) {
    for (Direction d : {Direction::Callees, Direction::Callers}) {
      const ContextBundle b = n_hop_context(fixture_graph(), c.catalog, m.method_id, 6, d);
      for (std::size_t k = 1; k < b.hop_sets.size(); ++k) {
        REQUIRE(std::includes(b.hop_sets[k].begin(), b.hop_sets[k].end(), b.hop_sets[k - 1].begin(),
                              b.hop_sets[k - 1].end()));
        if (b.hop_sets[k] == b.hop_sets[k - 1] && k + 1 < b.hop_sets.size()) {
          REQUIRE(b.hop_sets[k + 1] == b.hop_sets[k]);
        }
      }
    }
  }
}

TEST_CASE("call graph CSV round trip and recount") {
  test::TempDir tmp;
  write_callgraph(fixture_graph(), tmp / "cg.csv");
  CHECK(read_callgraph(tmp / "cg.csv") == fixture_graph());
  CHECK(oracle::recount_call_types(tmp / "cg.csv") == call_type_counts(fixture_graph()));
  CHECK(csv::read_file(tmp / "cg.csv").header == kCallGraphHeader);
  CHECK(kCallGraphHeader ==
        std::vector<std::string>{"caller_method_id", "callee_method_id", "callee_signature", "call_type", "line", "col"});
}

TEST_CASE("call type names") {
  for (CallType t : kCallTypes) CHECK(parse_call_type(to_string(t)) == t);
  CHECK_THROWS_AS(parse_call_type("Global"), Error);
}
