#include "oracles.hpp"

#include <algorithm>
#include <functional>

#include "srcwb/csv.hpp"
#include "srcwb/error.hpp"

namespace fs = std::filesystem;

namespace srcwb::oracle {

namespace {

const std::string& lexeme(const MethodSource& m, int n) {
  return m.tokens[static_cast<std::size_t>(m.ast.node(n).token)].lexeme;
}

bool is_terminal_text(const MethodSource& m, int n, std::string_view text) {
  return m.ast.is_terminal(n) && lexeme(m, n) == text;
}

bool is_statement(const std::string& t) {
  return t == "BlockStmt" || t == "LocalVarDecl" || t == "IfStmt" || t == "WhileStmt" ||
         t == "ForStmt" || t == "ReturnStmt" || t == "ExpressionStmt" || t == "EmptyStmt";
}

std::vector<int> statement_children(const MethodSource& m, int n) {
  std::vector<int> out;
  for (int c : m.ast.children(n)) {
    if (!m.ast.is_terminal(c) && is_statement(m.ast.node(c).type)) out.push_back(c);
  }
  return out;
}

int child_of_type(const MethodSource& m, int n, std::string_view type) {
  for (int c : m.ast.children(n)) {
    if (m.ast.node(c).type == type) return c;
  }
  return -1;
}

int body_block(const MethodSource& m) {
  for (int c : m.ast.children(0)) {
    if (m.ast.node(c).type == "BlockStmt") return c;
  }
  return -1;
}

// ---- path enumeration ----------------------------------------------------------

struct Outcomes {
  std::int64_t t = 1;  // evaluation orders ending true
  std::int64_t f = 1;  // evaluation orders ending false
};

Outcomes condition_outcomes(const MethodSource& m, int e) {
  const Ast& ast = m.ast;
  if (ast.is_terminal(e)) return {};
  const std::string& type = ast.node(e).type;
  auto kids = ast.children(e);
  if (type == "EnclosedExpr") return condition_outcomes(m, kids[1]);
  if (type == "UnaryExpr" && is_terminal_text(m, kids[0], "!")) {
    Outcomes o = condition_outcomes(m, kids[1]);
    return {o.f, o.t};
  }
  if (type == "BinaryExpr" && (is_terminal_text(m, kids[1], "&&") || is_terminal_text(m, kids[1], "||"))) {
    const Outcomes l = condition_outcomes(m, kids[0]);
    const Outcomes r = condition_outcomes(m, kids[2]);
    if (lexeme(m, kids[1]) == "&&") return {l.t * r.t, l.f + l.t * r.f};
    return {l.t + l.f * r.t, l.f * r.f};
  }
  return {};
}

struct PathCount {
  std::int64_t fall = 1;      // paths that continue after the statement
  std::int64_t returned = 0;  // paths that ended in a return inside it
};

PathCount count_paths(const MethodSource& m, int n) {
  const Ast& ast = m.ast;
  const std::string& type = ast.node(n).type;
  if (type == "BlockStmt") {
    PathCount acc;
    for (int c : statement_children(m, n)) {
      const PathCount p = count_paths(m, c);
      acc.returned += acc.fall * p.returned;
      acc.fall *= p.fall;
    }
    return acc;
  }
  if (type == "ReturnStmt") return {0, 1};
  if (type == "IfStmt") {
    const int cond = child_of_type(m, n, "Condition");
    const Outcomes o = condition_outcomes(m, ast.children(cond)[0]);
    const std::vector<int> br = statement_children(m, n);
    const PathCount then_p = count_paths(m, br[0]);
    const PathCount else_p = br.size() > 1 ? count_paths(m, br[1]) : PathCount{};
    return {o.t * then_p.fall + o.f * else_p.fall, o.t * then_p.returned + o.f * else_p.returned};
  }
  if (type == "WhileStmt" || type == "ForStmt") {
    const int cond = child_of_type(m, n, "Condition");
    const Outcomes o = cond >= 0 ? condition_outcomes(m, ast.children(cond)[0]) : Outcomes{1, 0};
    const PathCount body = count_paths(m, ast.children(n).back());
    return {o.f + o.t * body.fall, o.t * body.returned};
  }
  return {};
}

// ---- brute-force data flow -------------------------------------------------------

struct State {
  std::vector<int> last_read;
  std::vector<int> last_write;
  auto operator<=>(const State&) const = default;
};
using States = std::set<State>;

class DataflowWalker {
 public:
  DataflowWalker(const MethodSource& m, const VariableBinding& b, int unroll, std::set<Edge>& out)
      : m_(m), ast_(m.ast), b_(b), unroll_(unroll), out_(out) {}

  int var(int n) const { return b_.var_of[static_cast<std::size_t>(n)]; }

  States event(int node, int v, bool read, bool write, const States& in) {
    States res;
    for (State s : in) {
      const std::size_t k = static_cast<std::size_t>(v);
      if (s.last_read[k] >= 0) out_.insert({node, s.last_read[k], EdgeType::LastRead});
      if (s.last_write[k] >= 0) out_.insert({node, s.last_write[k], EdgeType::LastWrite});
      if (read) s.last_read[k] = node;
      if (write) s.last_write[k] = node;
      res.insert(std::move(s));
    }
    return res;
  }

  int assigned_node(int lhs) const {
    if (ast_.is_terminal(lhs)) return var(lhs) >= 0 ? lhs : -1;
    if (ast_.node(lhs).type == "FieldAccessExpr") {
      const int name = ast_.children(lhs)[2];
      return var(name) >= 0 ? name : -1;
    }
    return -1;
  }

  States expr(int n, States s) {
    if (ast_.is_terminal(n)) return var(n) >= 0 ? event(n, var(n), true, false, s) : s;
    const std::string& type = ast_.node(n).type;
    auto kids = ast_.children(n);
    if (type == "Type") return s;
    if (type == "AssignExpr") {
      const int target = assigned_node(kids[0]);
      if (target < 0) return expr(kids[2], expr(kids[0], std::move(s)));
      if (target != kids[0]) s = expr(ast_.children(kids[0])[0], std::move(s));
      s = expr(kids[2], std::move(s));
      return event(target, var(target), lexeme(m_, kids[1]) != "=", true, s);
    }
    if (type == "BinaryExpr" && (is_terminal_text(m_, kids[1], "&&") || is_terminal_text(m_, kids[1], "||"))) {
      States left = expr(kids[0], std::move(s));
      States both = expr(kids[2], left);
      both.insert(left.begin(), left.end());
      return both;
    }
    if (type == "ConditionalExpr") {
      States c = expr(kids[0], std::move(s));
      States a = expr(kids[2], c);
      States b = expr(kids[4], c);
      a.insert(b.begin(), b.end());
      return a;
    }
    if (type == "UnaryExpr" || type == "PostfixExpr") {
      const bool prefix = type == "UnaryExpr";
      const int op = prefix ? kids[0] : kids[1];
      const int operand = prefix ? kids[1] : kids[0];
      const bool step = lexeme(m_, op) == "++" || lexeme(m_, op) == "--";
      const int target = step ? assigned_node(operand) : -1;
      if (target < 0) return expr(operand, std::move(s));
      if (target != operand) s = expr(ast_.children(operand)[0], std::move(s));
      return event(target, var(target), true, true, s);
    }
    for (int c : kids) s = expr(c, std::move(s));
    return s;
  }

  States local_decl(int n, States s) {
    for (int d : ast_.children(n)) {
      if (ast_.node(d).type != "VariableDeclarator") continue;
      auto kids = ast_.children(d);
      for (std::size_t i = 1; i + 1 < kids.size(); ++i) {
        if (is_terminal_text(m_, kids[i], "=")) s = expr(kids[i + 1], std::move(s));
      }
      s = event(kids[0], var(kids[0]), false, true, s);
    }
    return s;
  }

  States loop(int cond, int body, int update, States s) {
    States exits;
    States x = std::move(s);
    for (int k = 0; k <= unroll_; ++k) {
      States c = cond >= 0 ? expr(ast_.children(cond)[0], x) : x;
      if (cond >= 0) exits.insert(c.begin(), c.end());
      if (k == unroll_) break;
      States after = stmt(body, std::move(c));
      if (update >= 0) {
        for (int u : ast_.children(update)) after = expr(u, std::move(after));
      }
      x = std::move(after);
    }
    return exits;
  }

  States stmt(int n, States s) {
    if (s.empty()) return s;
    const std::string& type = ast_.node(n).type;
    auto kids = ast_.children(n);
    if (type == "BlockStmt") {
      for (int c : statement_children(m_, n)) s = stmt(c, std::move(s));
      return s;
    }
    if (type == "LocalVarDecl") return local_decl(n, std::move(s));
    if (type == "ExpressionStmt") return expr(kids[0], std::move(s));
    if (type == "ReturnStmt") {
      if (kids.size() == 3) expr(kids[1], std::move(s));
      return {};
    }
    if (type == "IfStmt") {
      States c = expr(ast_.children(child_of_type(m_, n, "Condition"))[0], std::move(s));
      const std::vector<int> br = statement_children(m_, n);
      States a = stmt(br[0], c);
      States b = br.size() > 1 ? stmt(br[1], c) : c;
      a.insert(b.begin(), b.end());
      return a;
    }
    if (type == "WhileStmt") return loop(child_of_type(m_, n, "Condition"), kids.back(), -1, std::move(s));
    if (type == "ForStmt") {
      const int init = child_of_type(m_, n, "ForInit");
      if (init >= 0) {
        for (int c : ast_.children(init)) {
          if (ast_.node(c).type == "LocalVarDecl") {
            s = local_decl(c, std::move(s));
          } else if (!is_terminal_text(m_, c, ",")) {
            s = expr(c, std::move(s));
          }
        }
      }
      return loop(child_of_type(m_, n, "Condition"), kids.back(), child_of_type(m_, n, "ForUpdate"),
                  std::move(s));
    }
    return s;
  }

 private:
  const MethodSource& m_;
  const Ast& ast_;
  const VariableBinding& b_;
  int unroll_;
  std::set<Edge>& out_;
};

char bucket_of(std::size_t classes) {
  if (classes <= 20) return 'A';
  if (classes <= 50) return 'B';
  if (classes <= 100) return 'C';
  return 'D';
}

}  // namespace

std::int64_t enumerate_paths(const MethodSource& m) {
  const int body = body_block(m);
  if (body < 0) return 1;
  const PathCount p = count_paths(m, body);
  return p.fall + p.returned;
}

std::int64_t decision_count(const MethodSource& m) {
  std::int64_t n = 1;
  for (const Token& t : m.tokens) {
    if (t.kind == TokenKind::Keyword && (t.lexeme == "if" || t.lexeme == "while" || t.lexeme == "for")) ++n;
    if (t.kind == TokenKind::Operator && (t.lexeme == "?" || t.lexeme == "&&" || t.lexeme == "||")) ++n;
  }
  return n;
}

bool has_loop(const MethodSource& m) {
  for (const AstNode& n : m.ast.nodes()) {
    if (n.type == "WhileStmt" || n.type == "ForStmt") return true;
  }
  return false;
}

std::set<Edge> brute_force_dataflow(const MethodSource& m, const FeatureGraph& g, int unroll) {
  const VariableBinding b = bind_variables(m);
  std::set<Edge> out;
  DataflowWalker w(m, b, unroll, out);
  State init{std::vector<int>(b.vars.size(), -1), std::vector<int>(b.vars.size(), -1)};
  States s{init};
  // Field declarations are written before the method starts.
  std::map<std::string, int> field_nodes;
  for (std::size_t i = g.ast_size; i < g.nodes.size(); ++i) {
    if (g.nodes[i].type == kFieldDeclNode) field_nodes[g.nodes[i].token] = static_cast<int>(i);
  }
  for (std::size_t v = 0; v < b.vars.size(); ++v) {
    if (b.vars[v].is_field) s = w.event(field_nodes.at(b.vars[v].name), static_cast<int>(v), false, true, s);
  }
  for (int i = 0; i < static_cast<int>(m.ast.size()); ++i) {
    if (m.ast.node(i).type != "Parameter") continue;
    for (int c : m.ast.children(i)) {
      if (b.is_decl[static_cast<std::size_t>(c)]) s = w.event(c, w.var(c), false, true, s);
    }
  }
  const int body = body_block(m);
  if (body >= 0) w.stmt(body, std::move(s));
  return out;
}

std::vector<PairPath> all_pair_paths(const Ast& ast) {
  std::vector<int> leaves;
  for (int i = 0; i < static_cast<int>(ast.size()); ++i) {
    if (ast.node(i).token >= 0) leaves.push_back(i);
  }
  auto chain = [&](int n) {
    std::vector<int> c;
    for (int x = n; x >= 0; x = ast.node(x).parent) c.push_back(x);
    return c;
  };
  std::vector<PairPath> out;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    const std::vector<int> a = chain(leaves[i]);
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      const std::vector<int> b = chain(leaves[j]);
      std::size_t ia = a.size(), ib = b.size();
      while (ia > 0 && ib > 0 && a[ia - 1] == b[ib - 1]) {
        --ia;
        --ib;
      }
      PairPath p;
      p.start = leaves[i];
      p.end = leaves[j];
      for (std::size_t k = 0; k < ia; ++k) p.up.push_back(ast.node(a[k]).type);
      p.lca_type = ast.node(a[ia]).type;
      for (std::size_t k = ib; k-- > 0;) p.down.push_back(ast.node(b[k]).type);
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::array<std::size_t, 4> recount_call_types(const fs::path& callgraph_csv) {
  const csv::Table t = csv::read_file(callgraph_csv);
  const auto col = std::find(t.header.begin(), t.header.end(), "call_type") - t.header.begin();
  const std::array<std::string, 4> names = {"Local", "Package", "Project", "API"};
  std::array<std::size_t, 4> counts{};
  for (const csv::Row& r : t.rows) {
    const auto k = std::find(names.begin(), names.end(), r[static_cast<std::size_t>(col)]) - names.begin();
    if (k == 4) throw Error(ErrorKind::Parse, "unknown call type " + r[static_cast<std::size_t>(col)]);
    ++counts[static_cast<std::size_t>(k)];
  }
  return counts;
}

std::map<FitKey, std::pair<std::size_t, std::size_t>> recount_fit(const fs::path& sizes_csv,
                                                                    const fs::path& metadata_dir,
                                                                    const std::vector<std::int64_t>& thresholds) {
  std::map<std::string, std::string> owner;  // entity id -> project id
  std::map<std::string, std::size_t> classes_per_project;
  for (const csv::Row& r : csv::read_file(metadata_dir / "projects.csv").rows) owner[r[0]] = r[0];
  for (const csv::Row& r : csv::read_file(metadata_dir / "packages.csv").rows) owner[r[1]] = r[0];
  for (const csv::Row& r : csv::read_file(metadata_dir / "classes.csv").rows) {
    owner[r[2]] = r[0];
    ++classes_per_project[r[0]];
  }
  for (const csv::Row& r : csv::read_file(metadata_dir / "methods.csv").rows) owner[r[3]] = r[0];

  std::map<FitKey, std::pair<std::size_t, std::size_t>> out;
  for (const csv::Row& r : csv::read_file(sizes_csv).rows) {
    const std::int64_t size = std::stoll(r[3]);
    const char bucket = bucket_of(classes_per_project[owner.at(r[0])]);
    for (char b : {'*', bucket}) {
      for (std::int64_t t : thresholds) {
        auto& cell = out[{r[1], r[2], b, t}];
        ++cell.first;
        if (size <= t) ++cell.second;
      }
    }
  }
  return out;
}

double recount_ratio(const fs::path& sizes_csv, const std::string& tokenizer) {
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> per;  // id -> (lexer, tokenizer)
  for (const csv::Row& r : csv::read_file(sizes_csv).rows) {
    if (r[1] != "method") continue;
    if (r[2] == "lexer") per[r[0]].first = std::stoll(r[3]);
    if (r[2] == tokenizer) per[r[0]].second = std::stoll(r[3]);
  }
  double sum = 0;
  std::size_t n = 0;
  for (const auto& [id, c] : per) {
    if (c.first <= 0) continue;
    sum += 100.0 * static_cast<double>(c.second) / static_cast<double>(c.first);
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

}  // namespace srcwb::oracle
