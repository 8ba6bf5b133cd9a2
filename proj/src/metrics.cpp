#include "srcwb/metrics.hpp"

#include <algorithm>
#include <set>

#include "srcwb/error.hpp"

namespace srcwb {

namespace {

bool is_type(const Ast& ast, int n, std::string_view t) { return ast.node(n).type == t; }

int child_of(const Ast& ast, int n, std::string_view t) {
  for (int c : ast.children(n)) {
    if (is_type(ast, c, t)) return c;
  }
  return -1;
}

bool is_statement(const Ast& ast, int n) {
  const std::string& t = ast.node(n).type;
  return t == node::BlockStmt || t == node::LocalVarDecl || t == node::IfStmt ||
         t == node::WhileStmt || t == node::ForStmt || t == node::ReturnStmt ||
         t == node::ExpressionStmt || t == node::EmptyStmt;
}

// Statement children of an if: [then] or [then, else].
std::vector<int> branches(const Ast& ast, int if_node) {
  std::vector<int> out;
  for (int c : ast.children(if_node)) {
    if (is_statement(ast, c)) out.push_back(c);
  }
  return out;
}

int loop_body(const Ast& ast, int loop) {
  auto kids = ast.children(loop);
  return kids.back();
}

std::int64_t body_depth(const Ast& ast, int body, std::int64_t level);

std::int64_t stmt_depth(const Ast& ast, int s, std::int64_t level) {
  const std::string& t = ast.node(s).type;
  if (t == node::IfStmt) {
    auto br = branches(ast, s);
    std::int64_t d = body_depth(ast, br[0], level + 1);
    if (br.size() > 1) {
      if (is_type(ast, br[1], node::IfStmt)) {
        d = std::max(d, stmt_depth(ast, br[1], level));
      } else {
        d = std::max(d, body_depth(ast, br[1], level + 1));
      }
    }
    return d;
  }
  if (t == node::WhileStmt || t == node::ForStmt) return body_depth(ast, loop_body(ast, s), level + 1);
  if (t == node::BlockStmt) return body_depth(ast, s, level + 1);
  return level;
}

// `body` is entered at `level`; a block's statements sit at that level.
std::int64_t body_depth(const Ast& ast, int body, std::int64_t level) {
  if (!is_type(ast, body, node::BlockStmt)) return std::max(level, stmt_depth(ast, body, level));
  std::int64_t d = level;
  for (int c : ast.children(body)) {
    if (is_statement(ast, c)) d = std::max(d, stmt_depth(ast, c, level));
  }
  return d;
}

}  // namespace

std::int64_t short_circuit_count(const Ast& ast, const std::vector<Token>& tokens, int n) {
  std::int64_t k = 0;
  for (int i = n; i < ast.subtree_end(n); ++i) {
    if (!is_type(ast, i, node::BinaryExpr)) continue;
    const std::string& op = tokens[static_cast<std::size_t>(ast.node(ast.children(i)[1]).token)].lexeme;
    if (op == "&&" || op == "||") ++k;
  }
  return k;
}

std::int64_t npath(const Ast& ast, const std::vector<Token>& tokens, int n) {
  const std::string& t = ast.node(n).type;
  if (t == node::BlockStmt) {
    std::int64_t p = 1;
    for (int c : ast.children(n)) {
      if (is_statement(ast, c)) p *= npath(ast, tokens, c);
    }
    return p;
  }
  if (t == node::IfStmt) {
    auto br = branches(ast, n);
    const std::int64_t sc = short_circuit_count(ast, tokens, child_of(ast, n, node::Condition));
    if (br.size() == 1) return npath(ast, tokens, br[0]) + 1 + sc;
    return npath(ast, tokens, br[0]) + npath(ast, tokens, br[1]) + sc;
  }
  if (t == node::WhileStmt || t == node::ForStmt) {
    const int cond = child_of(ast, n, node::Condition);
    const std::int64_t sc = cond < 0 ? 0 : short_circuit_count(ast, tokens, cond);
    return npath(ast, tokens, loop_body(ast, n)) + 1 + sc;
  }
  if (t == node::MethodDeclaration || t == node::ConstructorDeclaration) {
    const int body = child_of(ast, n, node::BlockStmt);
    return body < 0 ? 1 : npath(ast, tokens, body);
  }
  return 1;
}

MetricRecord compute_metrics(const MethodSource& m) {
  if (m.ast.empty()) throw Error(ErrorKind::InvalidArgument, "method " + m.signature + " has no AST");
  const Ast& ast = m.ast;
  MetricRecord r;
  r.method_id = m.method_id;
  r.name = m.name;
  r.tloc = m.end_line - m.start_line + 1;

  std::set<int> lines;
  std::set<std::string> idents;
  for (const Token& tok : m.tokens) {
    lines.insert(tok.line);
    if (tok.kind == TokenKind::Identifier) idents.insert(tok.lexeme);
    if (tok.kind == TokenKind::Operator) ++r.nmop;
    if (tok.is_literal()) ++r.nmlt;
  }
  r.sloc = static_cast<std::int64_t>(lines.size());
  r.nuid = static_cast<std::int64_t>(idents.size());
  r.nmtk = static_cast<std::int64_t>(m.tokens.size());
  r.nmpr = static_cast<std::int64_t>(m.params.size());

  r.cmpx = 1;
  for (int i = 0; i < static_cast<int>(ast.size()); ++i) {
    const std::string& t = ast.node(i).type;
    if (t == node::IfStmt || t == node::WhileStmt || t == node::ForStmt ||
        t == node::ConditionalExpr) {
      ++r.cmpx;
    } else if (t == node::ReturnStmt) {
      ++r.nmrt;
    }
  }
  r.cmpx += short_circuit_count(ast, m.tokens, 0);
  r.npth = npath(ast, m.tokens, 0);
  const int body = child_of(ast, 0, node::BlockStmt);
  r.mxin = body < 0 ? 0 : body_depth(ast, body, 0);
  return r;
}

const std::vector<std::string>& metric_codes() {
  static const std::vector<std::string> codes = {"TLOC", "SLOC", "CMPX", "MXIN", "NPTH", "NMTK",
                                                 "NMPR", "NUID", "NMOP", "NMLT", "NMRT", "NAME"};
  return codes;
}

void store_metrics(const std::vector<MetricRecord>& records, PropertyStore& store) {
  std::map<std::string, PropertyRows> rows;
  for (const auto& r : records) {
    auto put = [&](const char* code, std::int64_t v) { rows[code].emplace_back(r.method_id, v); };
    put("TLOC", r.tloc);
    put("SLOC", r.sloc);
    put("CMPX", r.cmpx);
    put("MXIN", r.mxin);
    put("NPTH", r.npth);
    put("NMTK", r.nmtk);
    put("NMPR", r.nmpr);
    put("NUID", r.nuid);
    put("NMOP", r.nmop);
    put("NMLT", r.nmlt);
    put("NMRT", r.nmrt);
    rows["NAME"].emplace_back(r.method_id, r.name);
  }
  for (const auto& code : metric_codes()) store.add_property(code, rows[code]);
}

std::int64_t CorrelationTable::total() const {
  std::int64_t t = 0;
  for (const auto& col : counts) {
    for (auto c : col) t += c;
  }
  return t;
}

CorrelationTable property_correlation_report(const std::map<EntityId, PropertyValue>& xs,
                                             const std::map<EntityId, PropertyValue>& ys,
                                             std::size_t bins) {
  if (bins == 0) throw Error(ErrorKind::InvalidArgument, "bins must be positive");
  std::vector<std::pair<std::int64_t, std::int64_t>> points;
  for (const auto& [id, xv] : xs) {
    auto it = ys.find(id);
    if (it == ys.end()) continue;
    const auto* x = std::get_if<std::int64_t>(&xv);
    const auto* y = std::get_if<std::int64_t>(&it->second);
    if (x && y) points.emplace_back(*x, *y);
  }
  CorrelationTable table;
  if (points.empty()) return table;
  auto axis = [&](auto pick, std::int64_t& lo, std::int64_t& width, std::size_t& n) {
    std::int64_t mn = pick(points.front()), mx = mn;
    for (const auto& p : points) {
      mn = std::min(mn, pick(p));
      mx = std::max(mx, pick(p));
    }
    const std::int64_t span = mx - mn + 1;
    const auto b = static_cast<std::int64_t>(bins);
    lo = mn;
    width = (span + b - 1) / b;
    n = static_cast<std::size_t>((span + width - 1) / width);
  };
  axis([](const auto& p) { return p.first; }, table.x_lo, table.x_width, table.x_bins);
  axis([](const auto& p) { return p.second; }, table.y_lo, table.y_width, table.y_bins);
  table.counts.assign(table.x_bins, std::vector<std::int64_t>(table.y_bins, 0));
  for (const auto& [x, y] : points) {
    auto xi = static_cast<std::size_t>((x - table.x_lo) / table.x_width);
    auto yi = static_cast<std::size_t>((y - table.y_lo) / table.y_width);
    ++table.counts[xi][yi];
  }
  return table;
}

}  // namespace srcwb
