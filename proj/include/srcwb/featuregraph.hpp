#pragma once

#include <array>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "srcwb/parser.hpp"

namespace srcwb {

enum class EdgeType {
  Child,
  NextToken,
  LastRead,
  LastWrite,
  ComputedFrom,
  LastLexicalUse,
  GuardedBy,
  GuardedByNegation,
  ReturnTo,
  FormalArgName,
};
inline constexpr std::size_t kEdgeTypeCount = 10;
std::string_view to_string(EdgeType t);
/// Throws InvalidArgument for unknown names.
EdgeType parse_edge_type(std::string_view name);
const std::array<EdgeType, kEdgeTypeCount>& all_edge_types();

// Types of the synthetic nodes appended after the AST nodes.
inline constexpr std::string_view kFieldDeclNode = "FieldDecl";
inline constexpr std::string_view kFormalParamNode = "FormalParam";

struct GraphNode {
  std::string type;
  bool has_token = false;
  std::string token;  // lexeme for terminals, name for synthetic nodes
  int line = 0;       // 0 for synthetic nodes
  int col = 0;

  bool operator==(const GraphNode&) const = default;
};

struct Edge {
  int src = 0;
  int dst = 0;
  EdgeType type = EdgeType::Child;

  auto operator<=>(const Edge& o) const {
    if (auto c = type <=> o.type; c != 0) return c;
    if (auto c = src <=> o.src; c != 0) return c;
    return dst <=> o.dst;
  }
  bool operator==(const Edge&) const = default;
};

/// Nodes [0, ast_size) mirror the method AST; later nodes are synthetic.
/// Edges are kept sorted by (type, src, dst) and free of duplicates.
struct FeatureGraph {
  std::vector<GraphNode> nodes;
  std::size_t ast_size = 0;
  std::vector<Edge> edges;
  std::vector<int> token_order;  // terminal node indices in source order

  std::vector<Edge> edges_of(EdgeType t) const;
  bool operator==(const FeatureGraph& o) const {
    return nodes == o.nodes && ast_size == o.ast_size && edges == o.edges &&
           token_order == o.token_order;
  }
};

/// Formal parameter names of the corpus method invoked by the call node
/// (MethodCallExpr or ObjectCreationExpr index in the method AST), or nullopt
/// when the callee is not resolved inside the corpus.
using FormalResolver = std::function<std::optional<std::vector<std::string>>(int call_node)>;

/// The AST as a graph with Child edges only (the ASTS representation).
FeatureGraph ast_graph(const MethodSource& m);

FeatureGraph build_feature_graph(const MethodSource& m, const FormalResolver& resolver = {});

/// Keeps only edges whose type is in `keep`; nodes are untouched. Throws
/// InvalidArgument when `keep` is empty.
FeatureGraph filter_edges(const FeatureGraph& g, const std::set<EdgeType>& keep);

/// True when `filtered` has the same edges as `asts`, identical nodes on every
/// AST index, and only edge-free synthetic nodes beyond them.
bool matches_ast_view(const FeatureGraph& filtered, const FeatureGraph& asts);

/// {"nodes":[{"i","type","token","line","col"}],"edges":{"Child":[[s,d]],...}}
/// with edge types in enum order and empty types omitted.
std::string serialize_graph(const FeatureGraph& g);
/// Throws PositionedError(Parse) on malformed records.
FeatureGraph deserialize_graph(std::string_view text);

/// Variable binding of a method: for every AST node, the variable id bound to
/// it or -1. Exposed for oracles and guard checks.
struct VariableBinding {
  struct Var {
    std::string name;
    int decl_node = -1;  // declaring terminal, or -1 for class fields
    bool is_field = false;
  };
  std::vector<Var> vars;
  std::vector<int> var_of;        // per AST node
  std::vector<bool> is_decl;      // declaring occurrence (parameter or declarator name)
};
VariableBinding bind_variables(const MethodSource& m);

}  // namespace srcwb
