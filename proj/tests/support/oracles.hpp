#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "srcwb/callgraph.hpp"
#include "srcwb/catalog.hpp"
#include "srcwb/featuregraph.hpp"
#include "srcwb/pathcontexts.hpp"
#include "srcwb/tokenstats.hpp"

namespace srcwb::oracle {

/// Counts execution paths by enumeration: each condition is expanded into its
/// short-circuit outcomes, loop bodies run zero or one time, and `return`
/// ends a path.
std::int64_t enumerate_paths(const MethodSource& m);

/// 1 + if/while/for keywords + '?' + '&&' + '||', counted on the raw tokens.
std::int64_t decision_count(const MethodSource& m);

/// LastRead and LastWrite edges obtained by walking every execution path
/// separately, with each loop unrolled up to `unroll` times. No states are
/// merged, so the result is exact for acyclic methods.
std::set<Edge> brute_force_dataflow(const MethodSource& m, const FeatureGraph& g, int unroll = 2);

/// Whether the method contains a while or for loop.
bool has_loop(const MethodSource& m);

/// Every terminal pair's path computed from parent links alone, in
/// (start, end) token order.
struct PairPath {
  int start = -1;
  int end = -1;
  std::vector<std::string> up;
  std::string lca_type;
  std::vector<std::string> down;
};
std::vector<PairPath> all_pair_paths(const Ast& ast);

/// Call-type counts recounted from a callgraph CSV file.
std::array<std::size_t, 4> recount_call_types(const std::filesystem::path& callgraph_csv);

/// (granularity, tokenizer, bucket, threshold) -> (entities, fitting),
/// recounted from a sizes CSV and the metadata directory.
using FitKey = std::tuple<std::string, std::string, char, std::int64_t>;
std::map<FitKey, std::pair<std::size_t, std::size_t>> recount_fit(
    const std::filesystem::path& sizes_csv, const std::filesystem::path& metadata_dir,
    const std::vector<std::int64_t>& thresholds);

/// Mean over methods of 100 * tokenizer count / lexer count, from a sizes CSV.
double recount_ratio(const std::filesystem::path& sizes_csv, const std::string& tokenizer);

}  // namespace srcwb::oracle
