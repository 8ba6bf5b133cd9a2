#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "srcwb/catalog.hpp"
#include "srcwb/featuregraph.hpp"
#include "srcwb/properties.hpp"

namespace srcwb {

enum class CallType { Local, Package, Project, API };
std::string_view to_string(CallType t);
CallType parse_call_type(std::string_view text);
inline constexpr std::array<CallType, 4> kCallTypes = {CallType::Local, CallType::Package,
                                                       CallType::Project, CallType::API};

struct CallEdge {
  EntityId caller;
  EntityId callee;  // empty for API edges
  /// "Qualifier.name(argtypes)"; '?' stands for an unknown qualifier or type.
  /// Constructor calls use the class name twice: "B.B(int)".
  std::string callee_signature;
  CallType call_type = CallType::API;
  int line = 0;  // method-name token, or the type name of `new T(...)`
  int col = 0;

  bool resolved() const { return !callee.empty(); }
  /// Simple name of the invoked method.
  std::string callee_name() const;
  bool is_constructor() const;
  bool operator==(const CallEdge&) const = default;
};

/// Edges sorted by (caller id, line, col), with caller and callee indices.
class CallGraph {
 public:
  CallGraph() = default;
  explicit CallGraph(std::vector<CallEdge> edges);

  const std::vector<CallEdge>& edges() const { return edges_; }
  /// Indices into edges() of calls made by / made to a method.
  const std::vector<std::size_t>& outgoing(const EntityId& caller) const;
  const std::vector<std::size_t>& incoming(const EntityId& callee) const;
  const CallEdge* find_site(const EntityId& caller, int line, int col) const;

  bool operator==(const CallGraph& o) const { return edges_ == o.edges_; }

 private:
  std::vector<CallEdge> edges_;
  std::map<EntityId, std::vector<std::size_t>> by_caller_;
  std::map<EntityId, std::vector<std::size_t>> by_callee_;
};

struct CallGraphOptions {
  bool include_constructors = true;
};

/// One edge per syntactic call site of every cataloged method.
CallGraph build_callgraph(const Catalog& catalog, const std::vector<SourceFile>& files,
                          const CallGraphOptions& opts = {});

/// Class of a resolved callee relative to its caller, from metadata ids.
CallType classify_call(const Catalog& catalog, const EntityId& caller, const EntityId& callee);

/// Fractions per call type in kCallTypes order. Throws EmptyDistribution.
std::array<double, 4> classify_distribution(const CallGraph& g);
std::array<std::size_t, 4> call_type_counts(const CallGraph& g);

/// NUPC, NUCC, NMLC and NMNC for every cataloged method.
void connectivity_props(const CallGraph& g, const Catalog& catalog, PropertyStore& store);

enum class Direction { Callees, Callers };

struct ContextBundle {
  EntityId center;
  Direction direction = Direction::Callees;
  /// hop_sets[k]: methods within k resolved steps; hop_sets[0] == {center}.
  std::vector<std::set<EntityId>> hop_sets;
};

/// BFS over resolved edges. Throws NotFound for an uncataloged center.
ContextBundle n_hop_context(const CallGraph& g, const Catalog& catalog, const EntityId& center,
                            int n, Direction direction);

/// Token at which a call node's site is reported (method name or created type).
int call_site_node(const Ast& ast, int call_node);

/// Formal-parameter resolver for one method backed by the call graph.
FormalResolver make_formal_resolver(const CallGraph& g, const MethodSource& caller,
                                    const std::map<EntityId, const MethodSource*>& methods);

extern const std::vector<std::string> kCallGraphHeader;
void write_callgraph(const CallGraph& g, const std::filesystem::path& file);
CallGraph read_callgraph(const std::filesystem::path& file);

}  // namespace srcwb
