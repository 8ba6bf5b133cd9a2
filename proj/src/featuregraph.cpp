#include "srcwb/featuregraph.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "srcwb/error.hpp"

namespace srcwb {

namespace {
constexpr std::array<EdgeType, kEdgeTypeCount> kAllEdgeTypes = {
    EdgeType::Child,          EdgeType::NextToken,         EdgeType::LastRead,
    EdgeType::LastWrite,      EdgeType::ComputedFrom,      EdgeType::LastLexicalUse,
    EdgeType::GuardedBy,      EdgeType::GuardedByNegation, EdgeType::ReturnTo,
    EdgeType::FormalArgName};
}  // namespace

std::string_view to_string(EdgeType t) {
  switch (t) {
    case EdgeType::Child: return "Child";
    case EdgeType::NextToken: return "NextToken";
    case EdgeType::LastRead: return "LastRead";
    case EdgeType::LastWrite: return "LastWrite";
    case EdgeType::ComputedFrom: return "ComputedFrom";
    case EdgeType::LastLexicalUse: return "LastLexicalUse";
    case EdgeType::GuardedBy: return "GuardedBy";
    case EdgeType::GuardedByNegation: return "GuardedByNegation";
    case EdgeType::ReturnTo: return "ReturnTo";
    case EdgeType::FormalArgName: return "FormalArgName";
  }
  return "Child";
}

EdgeType parse_edge_type(std::string_view name) {
  for (EdgeType t : kAllEdgeTypes) {
    if (to_string(t) == name) return t;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown edge type '" + std::string(name) + "'");
}

const std::array<EdgeType, kEdgeTypeCount>& all_edge_types() { return kAllEdgeTypes; }

std::vector<Edge> FeatureGraph::edges_of(EdgeType t) const {
  std::vector<Edge> out;
  for (const Edge& e : edges) {
    if (e.type == t) out.push_back(e);
  }
  return out;
}

// ---- variable binding ---------------------------------------------------------

VariableBinding bind_variables(const MethodSource& m) {
  const Ast& ast = m.ast;
  VariableBinding b;
  b.var_of.assign(ast.size(), -1);
  b.is_decl.assign(ast.size(), false);
  std::vector<std::map<std::string, int>> scopes(1);
  std::map<std::string, int> fields;

  auto lexeme = [&](int n) -> const std::string& {
    return m.tokens[static_cast<std::size_t>(ast.node(n).token)].lexeme;
  };
  auto is_ident = [&](int n) {
    return ast.is_terminal(n) && ast.node(n).type == terminal_type(TokenKind::Identifier);
  };
  auto field_var = [&](const std::string& name) -> int {
    auto it = fields.find(name);
    if (it != fields.end()) return it->second;
    bool known = std::any_of(m.class_fields.begin(), m.class_fields.end(),
                             [&](const FieldInfo& f) { return f.name == name; });
    if (!known) return -1;
    const int id = static_cast<int>(b.vars.size());
    b.vars.push_back({name, -1, true});
    fields[name] = id;
    return id;
  };
  auto lookup = [&](const std::string& name) -> int {
    for (auto s = scopes.rbegin(); s != scopes.rend(); ++s) {
      auto it = s->find(name);
      if (it != s->end()) return it->second;
    }
    return field_var(name);
  };
  auto declare = [&](int n) {
    const int id = static_cast<int>(b.vars.size());
    b.vars.push_back({lexeme(n), n, false});
    scopes.back()[lexeme(n)] = id;
    b.var_of[static_cast<std::size_t>(n)] = id;
    b.is_decl[static_cast<std::size_t>(n)] = true;
  };

  std::function<void(int)> visit = [&](int n) {
    const std::string& t = ast.node(n).type;
    auto kids = ast.children(n);
    if (ast.is_terminal(n)) {
      if (is_ident(n)) {
        int v = lookup(lexeme(n));
        if (v >= 0) b.var_of[static_cast<std::size_t>(n)] = v;
      }
      return;
    }
    if (t == node::Type || t == node::Modifiers || t == node::TypeParameters ||
        t == node::ThrowsClause || t == node::Annotation) {
      return;
    }
    if (t == node::BlockStmt || t == node::ForStmt) {
      scopes.emplace_back();
      for (int c : kids) visit(c);
      scopes.pop_back();
      return;
    }
    if (t == node::VariableDeclarator) {
      for (std::size_t i = 1; i < kids.size(); ++i) visit(kids[i]);
      declare(kids[0]);
      return;
    }
    if (t == node::Parameter) {
      for (int c : kids) {
        if (is_ident(c)) declare(c);
      }
      return;
    }
    if (t == node::MethodCallExpr) {
      // [name, Arguments] or [receiver, '.', name, Arguments]
      if (kids.size() == 2) {
        visit(kids[1]);
      } else {
        visit(kids[0]);
        visit(kids[3]);
      }
      return;
    }
    if (t == node::FieldAccessExpr) {
      visit(kids[0]);
      const bool on_this = ast.is_terminal(kids[0]) && lexeme(kids[0]) == "this";
      if (on_this) {
        int v = field_var(lexeme(kids[2]));
        if (v >= 0) b.var_of[static_cast<std::size_t>(kids[2])] = v;
      }
      return;
    }
    if (t == node::MethodDeclaration || t == node::ConstructorDeclaration) {
      for (int c : kids) {
        if (!is_ident(c)) visit(c);
      }
      return;
    }
    for (int c : kids) visit(c);
  };
  if (!ast.empty()) visit(0);
  return b;
}

// ---- data flow ----------------------------------------------------------------

namespace {

struct FlowState {
  bool live = true;
  std::map<int, std::set<int>> reads;
  std::map<int, std::set<int>> writes;

  bool operator==(const FlowState&) const = default;
};

FlowState join(const FlowState& a, const FlowState& b) {
  if (!a.live) return b;
  if (!b.live) return a;
  FlowState out = a;
  for (const auto& [v, s] : b.reads) out.reads[v].insert(s.begin(), s.end());
  for (const auto& [v, s] : b.writes) out.writes[v].insert(s.begin(), s.end());
  return out;
}

bool is_stmt(const std::string& t) {
  return t == node::BlockStmt || t == node::LocalVarDecl || t == node::IfStmt ||
         t == node::WhileStmt || t == node::ForStmt || t == node::ReturnStmt ||
         t == node::ExpressionStmt || t == node::EmptyStmt;
}

class FlowBuilder {
 public:
  FlowBuilder(const MethodSource& m, const VariableBinding& b, std::set<Edge>& edges)
      : m_(m), ast_(m.ast), b_(b), edges_(edges) {}

  void event(int node, int var, bool read, bool write, FlowState& s) {
    if (!s.live) return;
    for (int r : s.reads[var]) edges_.insert({node, r, EdgeType::LastRead});
    for (int w : s.writes[var]) edges_.insert({node, w, EdgeType::LastWrite});
    if (read) s.reads[var] = {node};
    if (write) s.writes[var] = {node};
  }

  int var(int n) const { return b_.var_of[static_cast<std::size_t>(n)]; }
  const std::string& lexeme(int n) const {
    return m_.tokens[static_cast<std::size_t>(ast_.node(n).token)].lexeme;
  }

  void computed_from(int target, int expr_root) {
    for (int i = expr_root; i < ast_.subtree_end(expr_root); ++i) {
      if (var(i) >= 0) edges_.insert({target, i, EdgeType::ComputedFrom});
    }
  }

  // Node that is written when `lhs` is an assignment target, or -1.
  int target_of(int lhs) const {
    if (ast_.is_terminal(lhs)) return var(lhs) >= 0 ? lhs : -1;
    if (ast_.node(lhs).type == node::FieldAccessExpr) {
      int name = ast_.children(lhs)[2];
      return var(name) >= 0 ? name : -1;
    }
    return -1;
  }

  void expr(int n, FlowState& s) {
    if (ast_.is_terminal(n)) {
      if (var(n) >= 0) event(n, var(n), true, false, s);
      return;
    }
    const std::string& t = ast_.node(n).type;
    auto kids = ast_.children(n);
    if (t == node::Type) return;
    if (t == node::AssignExpr) {
      const int tgt = target_of(kids[0]);
      if (tgt < 0) {
        expr(kids[0], s);
        expr(kids[2], s);
        return;
      }
      if (tgt != kids[0]) expr(ast_.children(kids[0])[0], s);  // receiver of this.x
      expr(kids[2], s);
      event(tgt, var(tgt), lexeme(kids[1]) != "=", true, s);
      computed_from(tgt, kids[2]);
      return;
    }
    if (t == node::BinaryExpr) {
      const std::string& op = lexeme(kids[1]);
      expr(kids[0], s);
      if (op == "&&" || op == "||") {
        FlowState skipped = s;
        expr(kids[2], s);
        s = join(skipped, s);
      } else {
        expr(kids[2], s);
      }
      return;
    }
    if (t == node::ConditionalExpr) {
      expr(kids[0], s);
      FlowState other = s;
      expr(kids[2], s);
      expr(kids[4], other);
      s = join(s, other);
      return;
    }
    if (t == node::UnaryExpr || t == node::PostfixExpr) {
      const bool prefix = t == node::UnaryExpr;
      const int op = prefix ? kids[0] : kids[1];
      const int operand = prefix ? kids[1] : kids[0];
      const bool step = lexeme(op) == "++" || lexeme(op) == "--";
      const int tgt = step ? target_of(operand) : -1;
      if (tgt < 0) {
        expr(operand, s);
      } else {
        if (tgt != operand) expr(ast_.children(operand)[0], s);
        event(tgt, var(tgt), true, true, s);
      }
      return;
    }
    for (int c : kids) expr(c, s);
  }

  void declarator(int d, FlowState& s) {
    auto kids = ast_.children(d);
    const int name = kids[0];
    int init = -1;
    for (std::size_t i = 1; i + 1 < kids.size(); ++i) {
      if (ast_.is_terminal(kids[i]) && lexeme(kids[i]) == "=") init = kids[i + 1];
    }
    if (init >= 0) expr(init, s);
    event(name, var(name), false, true, s);
    if (init >= 0) computed_from(name, init);
  }

  void local_decl(int n, FlowState& s) {
    for (int c : ast_.children(n)) {
      if (ast_.node(c).type == node::VariableDeclarator) declarator(c, s);
    }
  }

  int child(int n, std::string_view type) const {
    for (int c : ast_.children(n)) {
      if (ast_.node(c).type == type) return c;
    }
    return -1;
  }

  void loop(int cond, int body, int update, FlowState& s) {
    const FlowState entry = s;
    FlowState x = entry;
    while (true) {
      FlowState c = x;
      if (cond >= 0) expr(ast_.children(cond)[0], c);
      FlowState it = c;
      stmt(body, it);
      if (update >= 0) {
        for (int u : ast_.children(update)) expr(u, it);
      }
      FlowState next = join(entry, it);
      if (next == x) {
        s = c;
        if (cond < 0) s.live = false;  // no condition: the loop never exits normally
        return;
      }
      x = std::move(next);
    }
  }

  void stmt(int n, FlowState& s) {
    const std::string& t = ast_.node(n).type;
    auto kids = ast_.children(n);
    if (t == node::BlockStmt) {
      for (int c : kids) {
        if (is_stmt(ast_.node(c).type)) stmt(c, s);
      }
    } else if (t == node::LocalVarDecl) {
      local_decl(n, s);
    } else if (t == node::ExpressionStmt) {
      expr(kids[0], s);
    } else if (t == node::ReturnStmt) {
      if (kids.size() == 3) expr(kids[1], s);
      s.live = false;
    } else if (t == node::IfStmt) {
      expr(ast_.children(child(n, node::Condition))[0], s);
      std::vector<int> br;
      for (int c : kids) {
        if (is_stmt(ast_.node(c).type)) br.push_back(c);
      }
      FlowState other = s;
      stmt(br[0], s);
      if (br.size() > 1) stmt(br[1], other);
      s = join(s, other);
    } else if (t == node::WhileStmt) {
      loop(child(n, node::Condition), kids.back(), -1, s);
    } else if (t == node::ForStmt) {
      const int init = child(n, node::ForInit);
      if (init >= 0) {
        for (int c : ast_.children(init)) {
          if (ast_.node(c).type == node::LocalVarDecl) {
            local_decl(c, s);
          } else if (!(ast_.is_terminal(c) && ast_.node(c).type == terminal_type(TokenKind::Separator))) {
            expr(c, s);
          }
        }
      }
      loop(child(n, node::Condition), kids.back(), child(n, node::ForUpdate), s);
    }
  }

 private:
  const MethodSource& m_;
  const Ast& ast_;
  const VariableBinding& b_;
  std::set<Edge>& edges_;
};

GraphNode graph_node(const MethodSource& m, const AstNode& n) {
  GraphNode g;
  g.type = n.type;
  g.has_token = n.token >= 0;
  if (g.has_token) g.token = m.tokens[static_cast<std::size_t>(n.token)].lexeme;
  g.line = n.line;
  g.col = n.col;
  return g;
}

}  // namespace

FeatureGraph ast_graph(const MethodSource& m) {
  FeatureGraph g;
  const Ast& ast = m.ast;
  g.ast_size = ast.size();
  for (const AstNode& n : ast.nodes()) g.nodes.push_back(graph_node(m, n));
  for (int i = 1; i < static_cast<int>(ast.size()); ++i) {
    g.edges.push_back({ast.parent(i), i, EdgeType::Child});
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.token_order = ast.empty() ? std::vector<int>{} : ast.terminals();
  return g;
}

FeatureGraph build_feature_graph(const MethodSource& m, const FormalResolver& resolver) {
  const Ast& ast = m.ast;
  if (ast.empty()) throw Error(ErrorKind::InvalidArgument, "method " + m.signature + " has no AST");
  for (const AstNode& n : ast.nodes()) {
    if (n.token >= static_cast<int>(m.tokens.size())) {
      throw Error(ErrorKind::InvalidArgument, "AST token index out of range in " + m.signature);
    }
  }
  FeatureGraph g = ast_graph(m);
  std::set<Edge> edges(g.edges.begin(), g.edges.end());
  const int n_ast = static_cast<int>(ast.size());

  // NextToken
  for (std::size_t i = 1; i < g.token_order.size(); ++i) {
    edges.insert({g.token_order[i - 1], g.token_order[i], EdgeType::NextToken});
  }

  // LastLexicalUse
  std::map<std::string, int> last_use;
  for (int t : g.token_order) {
    if (ast.node(t).type != terminal_type(TokenKind::Identifier)) continue;
    const std::string& lx = g.nodes[static_cast<std::size_t>(t)].token;
    auto it = last_use.find(lx);
    if (it != last_use.end()) edges.insert({t, it->second, EdgeType::LastLexicalUse});
    last_use[lx] = t;
  }

  // Data flow with field-decl synthetic writes at entry.
  const VariableBinding binding = bind_variables(m);
  FlowBuilder flow(m, binding, edges);
  FlowState state;
  for (std::size_t v = 0; v < binding.vars.size(); ++v) {
    if (!binding.vars[v].is_field) continue;
    const int synth = static_cast<int>(g.nodes.size());
    g.nodes.push_back({std::string(kFieldDeclNode), true, binding.vars[v].name, 0, 0});
    flow.event(synth, static_cast<int>(v), false, true, state);
  }
  for (int i = 0; i < n_ast; ++i) {
    if (ast.node(i).type != node::Parameter) continue;
    for (int c : ast.children(i)) {
      if (binding.is_decl[static_cast<std::size_t>(c)]) {
        flow.event(c, binding.var_of[static_cast<std::size_t>(c)], false, true, state);
      }
    }
  }
  for (int c : ast.children(0)) {
    if (ast.node(c).type == node::BlockStmt) flow.stmt(c, state);
  }

  // Guards: variable occurrences inside if branches whose condition uses the same variable.
  std::map<int, std::set<int>> cond_vars;  // IfStmt -> vars in its condition
  auto condition_of = [&](int if_node) {
    for (int c : ast.children(if_node)) {
      if (ast.node(c).type == node::Condition) return c;
    }
    return -1;
  };
  for (int i = 0; i < n_ast; ++i) {
    if (ast.node(i).type != node::IfStmt) continue;
    const int c = condition_of(i);
    auto& vs = cond_vars[i];
    for (int k = c; k < ast.subtree_end(c); ++k) {
      if (binding.var_of[static_cast<std::size_t>(k)] >= 0) {
        vs.insert(binding.var_of[static_cast<std::size_t>(k)]);
      }
    }
  }
  for (int t = 0; t < n_ast; ++t) {
    const int v = binding.var_of[static_cast<std::size_t>(t)];
    if (v < 0) continue;
    int child = t;
    for (int p = ast.parent(t); p >= 0; child = p, p = ast.parent(p)) {
      if (ast.node(p).type != node::IfStmt || !cond_vars[p].count(v)) continue;
      std::vector<int> br;
      for (int c : ast.children(p)) {
        if (is_stmt(ast.node(c).type)) br.push_back(c);
      }
      if (child == br[0]) edges.insert({t, condition_of(p), EdgeType::GuardedBy});
      if (br.size() > 1 && child == br[1]) {
        edges.insert({t, condition_of(p), EdgeType::GuardedByNegation});
      }
    }
  }

  // ReturnTo
  for (int i = 0; i < n_ast; ++i) {
    if (ast.node(i).type == node::ReturnStmt) {
      edges.insert({ast.children(i)[0], 0, EdgeType::ReturnTo});
    }
  }

  // FormalArgName
  if (resolver) {
    for (int i = 0; i < n_ast; ++i) {
      const std::string& t = ast.node(i).type;
      if (t != node::MethodCallExpr && t != node::ObjectCreationExpr) continue;
      auto names = resolver(i);
      if (!names) continue;
      int args_node = -1;
      for (int c : ast.children(i)) {
        if (ast.node(c).type == node::Arguments) args_node = c;
      }
      std::vector<int> args;
      for (int c : ast.children(args_node)) {
        if (ast.node(c).type != terminal_type(TokenKind::Separator)) args.push_back(c);
      }
      if (args.size() != names->size()) continue;
      for (std::size_t k = 0; k < args.size(); ++k) {
        const int synth = static_cast<int>(g.nodes.size());
        g.nodes.push_back({std::string(kFormalParamNode), true, (*names)[k], 0, 0});
        edges.insert({args[k], synth, EdgeType::FormalArgName});
      }
    }
  }

  g.edges.assign(edges.begin(), edges.end());
  return g;
}

FeatureGraph filter_edges(const FeatureGraph& g, const std::set<EdgeType>& keep) {
  if (keep.empty()) throw Error(ErrorKind::InvalidArgument, "edge filter must keep at least one type");
  FeatureGraph out = g;
  out.edges.clear();
  for (const Edge& e : g.edges) {
    if (keep.count(e.type)) out.edges.push_back(e);
  }
  return out;
}

bool matches_ast_view(const FeatureGraph& filtered, const FeatureGraph& asts) {
  if (filtered.edges != asts.edges || filtered.ast_size != asts.ast_size) return false;
  if (filtered.nodes.size() < asts.nodes.size()) return false;
  if (!std::equal(asts.nodes.begin(), asts.nodes.end(), filtered.nodes.begin())) return false;
  for (const Edge& e : filtered.edges) {
    if (static_cast<std::size_t>(e.src) >= asts.nodes.size() ||
        static_cast<std::size_t>(e.dst) >= asts.nodes.size()) {
      return false;
    }
  }
  return filtered.token_order == asts.token_order;
}

// ---- serialization --------------------------------------------------------------

std::string serialize_graph(const FeatureGraph& g) {
  using nlohmann::ordered_json;
  ordered_json nodes = ordered_json::array();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const GraphNode& n = g.nodes[i];
    ordered_json j;
    j["i"] = i;
    j["type"] = n.type;
    j["token"] = n.has_token ? ordered_json(n.token) : ordered_json(nullptr);
    j["line"] = n.line;
    j["col"] = n.col;
    nodes.push_back(std::move(j));
  }
  ordered_json edges = ordered_json::object();
  for (EdgeType t : kAllEdgeTypes) {
    ordered_json list = ordered_json::array();
    for (const Edge& e : g.edges) {
      if (e.type == t) list.push_back(ordered_json::array({e.src, e.dst}));
    }
    if (!list.empty()) edges[std::string(to_string(t))] = std::move(list);
  }
  ordered_json doc;
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  return doc.dump();
}

FeatureGraph deserialize_graph(std::string_view text) {
  using nlohmann::json;
  auto bad = [](const std::string& msg) -> PositionedError {
    return PositionedError(ErrorKind::Parse, 1, 1, "malformed graph record: " + msg);
  };
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw bad(e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges") ||
      !doc["nodes"].is_array() || !doc["edges"].is_object()) {
    throw bad("expected an object with 'nodes' and 'edges'");
  }
  FeatureGraph g;
  try {
    for (std::size_t i = 0; i < doc["nodes"].size(); ++i) {
      const json& j = doc["nodes"][i];
      if (j.at("i").get<std::size_t>() != i) throw bad("node indices are not dense");
      GraphNode n;
      n.type = j.at("type").get<std::string>();
      n.has_token = !j.at("token").is_null();
      if (n.has_token) n.token = j.at("token").get<std::string>();
      n.line = j.at("line").get<int>();
      n.col = j.at("col").get<int>();
      g.nodes.push_back(std::move(n));
    }
    for (const auto& [name, list] : doc["edges"].items()) {
      EdgeType t;
      try {
        t = parse_edge_type(name);
      } catch (const Error& e) {
        throw bad(e.what());
      }
      for (const json& pair : list) {
        if (!pair.is_array() || pair.size() != 2) throw bad("edge is not a pair");
        Edge e{pair[0].get<int>(), pair[1].get<int>(), t};
        if (e.src < 0 || e.dst < 0 || static_cast<std::size_t>(e.src) >= g.nodes.size() ||
            static_cast<std::size_t>(e.dst) >= g.nodes.size()) {
          throw bad("edge endpoint out of range");
        }
        g.edges.push_back(e);
      }
    }
  } catch (const json::exception& e) {
    throw bad(e.what());
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  while (g.ast_size < g.nodes.size() && g.nodes[g.ast_size].type != kFieldDeclNode &&
         g.nodes[g.ast_size].type != kFormalParamNode) {
    ++g.ast_size;
  }
  for (std::size_t i = 0; i < g.ast_size; ++i) {
    if (g.nodes[i].has_token) g.token_order.push_back(static_cast<int>(i));
  }
  return g;
}

}  // namespace srcwb
