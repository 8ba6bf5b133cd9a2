#include <doctest.h>

#include "hand_tables.hpp"
#include "oracles.hpp"
#include "srcwb/metrics.hpp"
#include "test_support.hpp"

using namespace srcwb;

namespace {

MethodSource method_of(const std::string& body) {
  return test::parse_single_method("class K {\n    int f;\n" + body + "\n}\n");
}

}  // namespace

TEST_CASE("hand-counted CMPX and NPTH agree with the metric and both oracles") {
  const auto& c = test::fixture_corpus();
  for (const test::HandCount& h : test::kHandMetrics) {
    CAPTURE(h.signature);
    const MethodSource& m = c.method(h.file, h.signature);
    const MetricRecord r = compute_metrics(m);
    CHECK(r.cmpx == h.cmpx);
    CHECK(r.npth == h.npth);
    CHECK(oracle::decision_count(m) == h.cmpx);
    CHECK(oracle::enumerate_paths(m) == h.npth);
  }
}

TEST_CASE("line, nesting and census metrics on a fixture method") {
  const MethodSource& m = test::fixture_corpus().method("calc/Metrics.java", "sumPositive(int[])");
  const MetricRecord r = compute_metrics(m);
  CHECK(r.tloc == 9);
  CHECK(r.sloc == 9);
  CHECK(r.mxin == 2);
  CHECK(r.nmpr == 1);
  CHECK(r.nmrt == 1);
  CHECK(r.name == "sumPositive");
  // public int sumPositive ( int [ ] xs ) { int s = 0 ; for ( int i = 0 ; i < xs . length ;
  // i ++ ) { if ( xs [ i ] > 0 ) { s += xs [ i ] ; } } return s ; }
  CHECK(r.nmtk == 55);
  CHECK(r.nmlt == 3);
  CHECK(r.nuid == 5);  // sumPositive xs s i length
}

TEST_CASE("blank lines and comments count toward TLOC only") {
  const MethodSource m = method_of(
      "    int g(int a) {\n"
      "        // note\n"
      "\n"
      "        return a;\n"
      "    }");
  const MetricRecord r = compute_metrics(m);
  CHECK(r.tloc == 5);
  CHECK(r.sloc == 3);
}

TEST_CASE("ternaries and short-circuit operators outside conditions add to CMPX only") {
  const MethodSource m = method_of(
      "    boolean g(boolean a, boolean b) {\n"
      "        boolean c = a && b;\n"
      "        return c || a ? true : false;\n"
      "    }");
  const MetricRecord r = compute_metrics(m);
  CHECK(r.cmpx == 4);
  CHECK(r.npth == 1);
  CHECK(oracle::decision_count(m) == 4);
  CHECK(oracle::enumerate_paths(m) == 1);
}

TEST_CASE("recurrence and enumeration diverge when a short-circuit guards a branching else") {
  // The recurrence charges the extra && outcome once; enumeration routes it
  // through both else paths.
  const MethodSource m = method_of(
      "    int g(int a, int b) {\n"
      "        int r = 0;\n"
      "        if (a > 0 && b > 0) {\n"
      "            r = 1;\n"
      "        } else {\n"
      "            if (a < b) {\n"
      "                r = 2;\n"
      "            }\n"
      "        }\n"
      "        return r;\n"
      "    }");
  CHECK(compute_metrics(m).npth == 1 + 2 + 1);
  CHECK(oracle::enumerate_paths(m) == 1 + 2 * 2);
}

TEST_CASE("recurrence multiplies across an early return") {
  const MethodSource m = method_of(
      "    int g(int a) {\n"
      "        if (a < 0) {\n"
      "            return 0;\n"
      "        }\n"
      "        if (a > 9) {\n"
      "            a = 9;\n"
      "        }\n"
      "        return a;\n"
      "    }");
  CHECK(compute_metrics(m).npth == 4);
  CHECK(oracle::enumerate_paths(m) == 3);
}

TEST_CASE("property: NPTH equals path enumeration without short-circuits or early returns") {
  Rng rng(20240611);
  test::GenOptions o;
  o.short_circuit = false;
  o.returns = false;
  for (int i = 0; i < 300; ++i) {
    const std::string src = test::random_class(rng, o);
    CAPTURE(src);
    const MethodSource m = test::parse_single_method(src);
    const MetricRecord r = compute_metrics(m);
    REQUIRE(r.npth == oracle::enumerate_paths(m));
    REQUIRE(r.cmpx == oracle::decision_count(m));
  }
}

TEST_CASE("property: CMPX equals the decision count on unrestricted methods") {
  Rng rng(77);
  for (int i = 0; i < 300; ++i) {
    const std::string src = test::random_class(rng);
    CAPTURE(src);
    const MethodSource m = test::parse_single_method(src);
    REQUIRE(compute_metrics(m).cmpx == oracle::decision_count(m));
  }
}

TEST_CASE("property: the token census adds up on every fixture method") {
  for (const MethodSource* m : test::fixture_corpus().all_methods()) {
    CAPTURE(m->signature);
    const MetricRecord r = compute_metrics(*m);
    std::int64_t identifiers = 0, structural = 0;
    for (const Token& t : m->tokens) {
      if (t.kind == TokenKind::Identifier) ++identifiers;
      if (t.kind == TokenKind::Keyword || t.kind == TokenKind::Separator) ++structural;
    }
    CHECK(r.nmop + r.nmlt + identifiers + structural == r.nmtk);
    CHECK(r.nmtk == static_cast<std::int64_t>(lex(m->text).size()));
  }
}

TEST_CASE("correlation table bins every method with both values") {
  std::map<EntityId, PropertyValue> xs, ys;
  for (int i = 0; i < 20; ++i) {
    const EntityId id = assign_id(EntityKind::Method, "m" + std::to_string(i));
    xs[id] = std::int64_t{i};
    if (i % 2 == 0) ys[id] = std::int64_t{i * 3};
  }
  xs[assign_id(EntityKind::Method, "text")] = std::string("x");
  const CorrelationTable t = property_correlation_report(xs, ys, 4);
  CHECK(t.total() == 10);
  CHECK(t.x_bins == 4);
  CHECK(t.y_bins == 4);
  CHECK(t.x_lo == 0);
  CHECK(t.y_lo == 0);
  for (int i = 0; i < 20; i += 2) {
    const auto bx = static_cast<std::size_t>((i - t.x_lo) / t.x_width);
    const auto by = static_cast<std::size_t>((3 * i - t.y_lo) / t.y_width);
    CHECK(t.counts[bx][by] >= 1);
  }
  CHECK(property_correlation_report(xs, {}, 4).total() == 0);
}
