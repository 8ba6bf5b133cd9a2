#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "srcwb/parser.hpp"
#include "srcwb/properties.hpp"

namespace srcwb {

struct MetricRecord {
  EntityId method_id;
  std::int64_t tloc = 0;
  std::int64_t sloc = 0;
  std::int64_t cmpx = 1;
  std::int64_t mxin = 0;
  std::int64_t npth = 1;
  std::int64_t nmtk = 0;
  std::int64_t nmpr = 0;
  std::int64_t nuid = 0;
  std::int64_t nmop = 0;
  std::int64_t nmlt = 0;
  std::int64_t nmrt = 0;
  std::string name;

  bool operator==(const MetricRecord&) const = default;
};

MetricRecord compute_metrics(const MethodSource& m);

/// NPATH of the statement subtree rooted at `node` of a method AST.
/// sequence = product; if = NP(then)+1+sc; if/else = NP(then)+NP(else)+sc;
/// while/for = NP(body)+1+sc; any other statement = 1; sc counts && and ||
/// in the condition.
std::int64_t npath(const Ast& ast, const std::vector<Token>& tokens, int node);

/// Number of && and || operators inside the subtree at `node`.
std::int64_t short_circuit_count(const Ast& ast, const std::vector<Token>& tokens, int node);

/// Stores every computed key of `records` into `store`.
void store_metrics(const std::vector<MetricRecord>& records, PropertyStore& store);

/// Codes filled by compute_metrics, in canonical order.
const std::vector<std::string>& metric_codes();

/// Two-dimensional histogram of methods that have both properties. Bin i on
/// an axis covers [lo + i*width, lo + (i+1)*width).
struct CorrelationTable {
  std::int64_t x_lo = 0, x_width = 1;
  std::int64_t y_lo = 0, y_width = 1;
  std::size_t x_bins = 0, y_bins = 0;
  std::vector<std::vector<std::int64_t>> counts;  // [x][y]
  std::int64_t total() const;
};

/// `bins` equal-width integer bins per axis spanning the observed range.
/// Empty intersection yields an empty table. Non-integer values are skipped.
CorrelationTable property_correlation_report(const std::map<EntityId, PropertyValue>& xs,
                                             const std::map<EntityId, PropertyValue>& ys,
                                             std::size_t bins);

}  // namespace srcwb
