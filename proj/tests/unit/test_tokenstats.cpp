#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "srcwb/csv.hpp"
#include "srcwb/error.hpp"
#include "srcwb/tokenstats.hpp"
#include "test_support.hpp"

using namespace srcwb;

namespace {

std::vector<std::string> method_texts(const test::LoadedCorpus& c) {
  std::vector<std::string> out;
  for (const MethodSource* m : c.all_methods()) out.push_back(m->text);
  return out;
}

const BpeVocab& code_vocab() {
  static const BpeVocab v = train_bpe(method_texts(test::fixture_corpus()), 400, "code");
  return v;
}

}  // namespace

TEST_CASE("pretokenize splits on whitespace and keeps the leading run") {
  const std::vector<std::string_view> p = pretokenize("  int x=1;\n\treturn  ");
  const std::vector<std::string_view> want{"  int", " x=1;", "\n\treturn", "  "};
  CHECK(p == want);
  CHECK(pretokenize("").empty());
}

TEST_CASE("property: pretoken pieces concatenate back to the input") {
  Rng rng(71);
  for (int i = 0; i < 500; ++i) {
    const std::string s = test::random_bytes(rng, 60, i % 3 != 0);
    std::string joined;
    for (std::string_view piece : pretokenize(s)) {
      REQUIRE_FALSE(piece.empty());
      joined += piece;
    }
    REQUIRE(joined == s);
  }
}

TEST_CASE("merges take the most frequent pair and break ties by byte order") {
  // (a,b) and (c,d) both occur twice; (a,b) is smaller.
  const BpeVocab v = train_bpe({"ab", "ab", "cd", "cd"}, 300);
  REQUIRE(v.merges.size() == 2);
  CHECK(v.merges[0] == std::pair<std::string, std::string>{"a", "b"});
  CHECK(v.merges[1] == std::pair<std::string, std::string>{"c", "d"});
  CHECK(train_bpe({"ab", "ab", "cd", "cd"}, 257).merges.size() == 1);
  // No pair occurs twice: nothing to learn.
  CHECK(train_bpe({"ab", "cd"}, 300).merges.empty());
  // Merges never cross the space that starts a piece.
  const BpeVocab spaced = train_bpe({"a b", "a b", "a b"}, 300);
  for (const auto& [l, r] : spaced.merges) CHECK_FALSE((l == "a" && r == " "));
  CHECK_THROWS_AS(train_bpe({"ab"}, 256), Error);
  CHECK_THROWS_AS(train_bpe({}, 300), Error);
}

TEST_CASE("encoding by hand") {
  const BpeVocab v = train_bpe({"abc", "abc", "abc", "ab"}, 300);
  // ab occurs 4 times, then (ab,c) 3 times.
  REQUIRE(v.merges.size() == 2);
  CHECK(bpe_encode(v, "abc abx") == std::vector<std::string>{"abc", " ", "ab", "x"});
  CHECK(BpeEncoder(v).count("abc abx") == 4);
}

TEST_CASE("property: byte-level BPE is lossless on arbitrary bytes") {
  Rng rng(404);
  const BpeEncoder enc(code_vocab());
  for (int i = 0; i < 400; ++i) {
    const std::string s = test::random_bytes(rng, 80, i % 2 == 0);
    const std::vector<std::string> sym = enc.encode(s);
    REQUIRE(bpe_decode(sym) == s);
    REQUIRE(enc.count(s) == sym.size());
    REQUIRE(sym.size() <= s.size());
  }
  for (const MethodSource* m : test::fixture_corpus().all_methods()) {
    CHECK(bpe_decode(enc.encode(m->text)) == m->text);
  }
}

TEST_CASE("vocabulary files round-trip every byte") {
  BpeVocab v = code_vocab();
  v.merges.emplace_back(std::string("\n\xff", 2), std::string(" \0", 2));
  test::TempDir tmp;
  write_vocab(v, tmp / "v.txt");
  CHECK(csv::read_text(tmp / "v.txt").rfind("#version: 0.2\n", 0) == 0);
  CHECK(read_vocab(tmp / "v.txt") == v);
  std::set<std::string> printable(byte_to_unicode().begin(), byte_to_unicode().end());
  CHECK(printable.size() == 256);
  CHECK(byte_to_unicode()[' '] == "\xc4\xa0");  // U+0120
  CHECK(byte_to_unicode()['A'] == "A");
}

TEST_CASE("a larger vocabulary extends the merge list and never lengthens an encoding") {
  const std::vector<std::string> docs = method_texts(test::fixture_corpus());
  const BpeVocab small = train_bpe(docs, 320);
  const BpeVocab large = code_vocab();
  REQUIRE(large.merges.size() > small.merges.size());
  CHECK(std::equal(small.merges.begin(), small.merges.end(), large.merges.begin()));
  const BpeEncoder a(small), b(large);
  for (const MethodSource* m : test::fixture_corpus().all_methods()) CHECK(b.count(m->text) <= a.count(m->text));
}

TEST_CASE("ratio of the lexer against itself is exactly 100") {
  const std::vector<const MethodSource*> methods = test::fixture_corpus().all_methods();
  CHECK(tokenizer_ratio(lexer_tokenizer(), methods) == 100.0);
  CHECK(tokenizer_ratio(lexer_tokenizer(), methods, true) == 100.0);
  CHECK(lexer_tokenizer().count("int x = 1;") == 5);
  CHECK(lexer_tokenizer().count("a # b") == 0);
  CHECK_THROWS_AS(tokenizer_ratio(lexer_tokenizer(), {}), Error);
}

TEST_CASE("pooled and mean ratios by hand") {
  const auto& c = test::fixture_corpus();
  const MethodSource& a = c.method("demo/src/app/A.java", "helper(int)");
  const MethodSource& b = c.method("demo/src/lib/C.java", "fmt(int)");
  const NamedTokenizer chars{"chars", [](std::string_view t) { return t.size(); }};
  const double na = static_cast<double>(a.text.size()), nb = static_cast<double>(b.text.size());
  const double la = static_cast<double>(a.tokens.size()), lb = static_cast<double>(b.tokens.size());
  CHECK(tokenizer_ratio(chars, {&a, &b}) == doctest::Approx((100 * na / la + 100 * nb / lb) / 2));
  CHECK(tokenizer_ratio(chars, {&a, &b}, true) == doctest::Approx(100 * (na + nb) / (la + lb)));
}

TEST_CASE("sizes add up the hierarchy and fit agrees with a recount") {
  const test::LoadedCorpus c = test::load_corpus(test::inflated_corpus_dir());
  const std::vector<NamedTokenizer> toks{lexer_tokenizer(), bpe_tokenizer("code", code_vocab())};
  const std::vector<SizeRow> sizes = compute_sizes(c.catalog, c.files, toks);

  std::map<std::pair<EntityId, std::string>, std::int64_t> size;
  for (const SizeRow& r : sizes) size[{r.entity, r.tokenizer}] = r.subtokens;
  for (const NamedTokenizer& t : toks) {
    for (const MethodMeta& m : c.catalog.methods()) {
      CHECK(size.at({m.method_id, t.tag}) == static_cast<std::int64_t>(t.count(c.methods.at(m.method_id)->text)));
    }
    std::map<EntityId, std::int64_t> pkg, proj;
    for (const ClassMeta& k : c.catalog.classes()) pkg[k.package_id] += size.at({k.class_id, t.tag});
    for (const PackageMeta& p : c.catalog.packages()) {
      CHECK(size.at({p.package_id, t.tag}) == pkg[p.package_id]);
      proj[p.project_id] += pkg[p.package_id];
    }
    for (const ProjectMeta& p : c.catalog.projects()) CHECK(size.at({p.project_id, t.tag}) == proj[p.project_id]);
  }

  test::TempDir tmp;
  write_metadata(c.catalog, tmp / "metadata");
  write_sizes(sizes, tmp / "sizes.csv");
  CHECK(read_sizes(tmp / "sizes.csv") == sizes);
  const std::vector<std::int64_t> thresholds{32, 64, 128, 256, 512};
  const std::vector<FitRow> fit = window_fit(c.catalog, sizes, thresholds, true);
  const auto recount = oracle::recount_fit(tmp / "sizes.csv", tmp / "metadata", thresholds);
  CHECK(fit.size() == recount.size());
  std::set<char> seen_buckets;
  for (const FitRow& r : fit) {
    const auto& [entities, fitting] = recount.at({std::string(to_string(r.granularity)), r.tokenizer, r.bucket, r.threshold});
    CHECK(r.entities == entities);
    CHECK(r.fitting == fitting);
    seen_buckets.insert(r.bucket);
  }
  CHECK(seen_buckets == std::set<char>{'*', 'A', 'B', 'C', 'D'});

  // Fit fraction never decreases with the threshold.
  for (std::size_t i = 1; i < fit.size(); ++i) {
    const FitRow& p = fit[i - 1];
    const FitRow& q = fit[i];
    if (p.granularity == q.granularity && p.tokenizer == q.tokenizer && p.bucket == q.bucket) {
      CHECK(p.threshold < q.threshold);
      CHECK(p.fraction() <= q.fraction());
    }
  }

  const double ratio = tokenizer_ratio(toks[1], c.all_methods());
  CHECK(ratio == doctest::Approx(oracle::recount_ratio(tmp / "sizes.csv", "code")).epsilon(1e-12));
  CHECK(window_fit(c.catalog, sizes, thresholds, false).size() * 5 == fit.size());
}

TEST_CASE("granularity names") {
  for (Granularity g : kGranularities) CHECK(parse_granularity(to_string(g)) == g);
  CHECK(to_string(Granularity::Method) == "method");
  CHECK_THROWS_AS(parse_granularity("file"), Error);
}
