#include "srcwb/callgraph.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "srcwb/csv.hpp"
#include "srcwb/error.hpp"

namespace srcwb {

const std::vector<std::string> kCallGraphHeader = {"caller_method_id", "callee_method_id",
                                                   "callee_signature", "call_type",
                                                   "line",             "col"};

std::string_view to_string(CallType t) {
  switch (t) {
    case CallType::Local: return "Local";
    case CallType::Package: return "Package";
    case CallType::Project: return "Project";
    case CallType::API: return "API";
  }
  return "API";
}

CallType parse_call_type(std::string_view text) {
  for (CallType t : kCallTypes) {
    if (to_string(t) == text) return t;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown call type '" + std::string(text) + "'");
}

std::string CallEdge::callee_name() const {
  const auto open = callee_signature.find('(');
  const std::string head = callee_signature.substr(0, open);
  const auto dot = head.rfind('.');
  return dot == std::string::npos ? head : head.substr(dot + 1);
}

bool CallEdge::is_constructor() const {
  const auto open = callee_signature.find('(');
  const std::string head = callee_signature.substr(0, open);
  const auto dot = head.rfind('.');
  if (dot == std::string::npos) return false;
  const std::string qualifier = head.substr(0, dot);
  const auto qdot = qualifier.rfind('.');
  const std::string simple = qdot == std::string::npos ? qualifier : qualifier.substr(qdot + 1);
  return simple == head.substr(dot + 1);
}

// ---- CallGraph ----------------------------------------------------------------

CallGraph::CallGraph(std::vector<CallEdge> edges) : edges_(std::move(edges)) {
  std::stable_sort(edges_.begin(), edges_.end(), [](const CallEdge& a, const CallEdge& b) {
    if (a.caller != b.caller) return a.caller < b.caller;
    if (a.line != b.line) return a.line < b.line;
    return a.col < b.col;
  });
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    by_caller_[edges_[i].caller].push_back(i);
    if (edges_[i].resolved()) by_callee_[edges_[i].callee].push_back(i);
  }
}

namespace {
const std::vector<std::size_t> kNoEdges;
}

const std::vector<std::size_t>& CallGraph::outgoing(const EntityId& caller) const {
  auto it = by_caller_.find(caller);
  return it == by_caller_.end() ? kNoEdges : it->second;
}

const std::vector<std::size_t>& CallGraph::incoming(const EntityId& callee) const {
  auto it = by_callee_.find(callee);
  return it == by_callee_.end() ? kNoEdges : it->second;
}

const CallEdge* CallGraph::find_site(const EntityId& caller, int line, int col) const {
  for (std::size_t i : outgoing(caller)) {
    if (edges_[i].line == line && edges_[i].col == col) return &edges_[i];
  }
  return nullptr;
}

int call_site_node(const Ast& ast, int call_node) {
  auto kids = ast.children(call_node);
  if (ast.node(call_node).type == node::MethodCallExpr) {
    return kids.size() == 2 ? kids[0] : kids[2];
  }
  if (ast.node(call_node).type == node::ObjectCreationExpr) {
    int site = -1;
    for (int c : ast.children(kids[1])) {
      if (ast.node(c).type == terminal_type(TokenKind::Identifier)) site = c;
    }
    return site;
  }
  throw Error(ErrorKind::InvalidArgument, "node is not a call");
}

// ---- resolution -----------------------------------------------------------------

namespace {

struct ClassEntry {
  const ClassMeta* meta = nullptr;
  const TypeInfo* type = nullptr;
  const SourceFile* file = nullptr;
  std::vector<const MethodSource*> methods;
};

bool is_primitive(const std::string& t) {
  static const std::set<std::string> prims = {"boolean", "byte",  "char",  "short",
                                              "int",     "long",  "float", "double"};
  return prims.count(t) != 0;
}

int numeric_rank(const std::string& t) {
  if (t == "byte") return 1;
  if (t == "short") return 2;
  if (t == "char") return 2;
  if (t == "int") return 3;
  if (t == "long") return 4;
  if (t == "float") return 5;
  if (t == "double") return 6;
  return 0;
}

std::string boxed(const std::string& t) {
  static const std::map<std::string, std::string> box = {
      {"boolean", "Boolean"}, {"byte", "Byte"},   {"char", "Character"}, {"short", "Short"},
      {"int", "Integer"},     {"long", "Long"},   {"float", "Float"},    {"double", "Double"}};
  auto it = box.find(t);
  return it == box.end() ? std::string{} : it->second;
}

std::string simple_name(const std::string& t) {
  const auto dot = t.rfind('.');
  return dot == std::string::npos ? t : t.substr(dot + 1);
}

std::string promote(const std::string& a, const std::string& b) {
  const int ra = numeric_rank(a), rb = numeric_rank(b);
  if (ra == 0 || rb == 0) return {};
  const int r = std::max({ra, rb, 3});
  switch (r) {
    case 3: return "int";
    case 4: return "long";
    case 5: return "float";
    default: return "double";
  }
}

class Resolver {
 public:
  Resolver(const Catalog& catalog, const std::vector<SourceFile>& files) : catalog_(catalog) {
    std::map<std::string, const SourceFile*> by_path;
    for (const SourceFile& f : files) by_path[f.relpath] = &f;
    for (const ClassMeta& c : catalog.classes()) {
      auto fit = by_path.find(c.class_path);
      if (fit == by_path.end()) continue;
      const SourceFile* f = fit->second;
      auto tit = std::find_if(f->unit.types.begin(), f->unit.types.end(),
                              [&](const TypeInfo& t) { return t.name == c.class_name; });
      if (tit == f->unit.types.end()) continue;
      ClassEntry& e = entries_.emplace_back();
      e.meta = &c;
      e.type = &*tit;
      e.file = f;
      for (const MethodSource& m : f->methods) {
        if (m.class_name == c.class_name) e.methods.push_back(&m);
      }
      const PackageMeta* pkg = catalog.find_package(c.package_id);
      by_dir_[c.package_id][c.class_name] = &e;
      by_pkg_name_[c.project_id][pkg ? pkg->package_name : ""][c.class_name] = &e;
      by_file_[c.class_path][c.class_name] = &e;
    }
  }

  const ClassEntry* entry_for(const MethodSource& m) const {
    auto it = by_file_.find(m.file_relpath);
    if (it == by_file_.end()) return nullptr;
    auto c = it->second.find(m.class_name);
    return c == it->second.end() ? nullptr : c->second;
  }

  const ClassEntry* resolve_type(const std::string& t, const ClassEntry& ctx) const {
    if (t.empty() || t.back() == ']' || is_primitive(t)) return nullptr;
    const auto& names = by_pkg_name_.at(ctx.meta->project_id);
    auto in_pkg = [&](const std::string& pkg, const std::string& n) -> const ClassEntry* {
      auto p = names.find(pkg);
      if (p == names.end()) return nullptr;
      auto c = p->second.find(n);
      return c == p->second.end() ? nullptr : c->second;
    };
    if (auto dot = t.rfind('.'); dot != std::string::npos) {
      return in_pkg(t.substr(0, dot), t.substr(dot + 1));
    }
    if (auto d = by_dir_.find(ctx.meta->package_id); d != by_dir_.end()) {
      if (auto c = d->second.find(t); c != d->second.end()) return c->second;
    }
    for (const ImportInfo& im : ctx.file->unit.imports) {
      if (im.is_static || im.wildcard) continue;
      if (simple_name(im.name) == t && im.name.size() > t.size()) {
        if (auto* e = in_pkg(im.name.substr(0, im.name.size() - t.size() - 1), t)) return e;
      }
    }
    for (const ImportInfo& im : ctx.file->unit.imports) {
      if (im.is_static || !im.wildcard) continue;
      if (auto* e = in_pkg(im.name, t)) return e;
    }
    return nullptr;
  }

  const ClassEntry* superclass(const ClassEntry& c) const {
    return c.type->superclass.empty() ? nullptr : resolve_type(c.type->superclass, c);
  }

  // Class, its superclass chain, then every interface reachable from them.
  std::vector<const ClassEntry*> lineage(const ClassEntry& c) const {
    std::vector<const ClassEntry*> out;
    std::set<const ClassEntry*> seen;
    for (const ClassEntry* k = &c; k && seen.insert(k).second; k = superclass(*k)) out.push_back(k);
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (const std::string& itf : out[i]->type->interfaces) {
        const ClassEntry* e = resolve_type(itf, *out[i]);
        if (e && seen.insert(e).second) out.push_back(e);
      }
    }
    return out;
  }

  bool is_subtype(const std::string& sub, const std::string& super, const ClassEntry& ctx) const {
    const ClassEntry* s = resolve_type(sub, ctx);
    if (!s) return false;
    for (const ClassEntry* k : lineage(*s)) {
      if (k->type->name == simple_name(super)) return true;
    }
    return false;
  }

  int arg_score(const std::string& param, const std::string& arg, const ClassEntry& ctx) const {
    if (arg.empty()) return 1;
    if (arg == param || simple_name(arg) == simple_name(param)) return 3;
    if (arg == "null") return is_primitive(param) ? -1 : 2;
    const int ra = numeric_rank(arg), rp = numeric_rank(param);
    if (ra && rp && ra <= rp && !(arg == "char" && param == "short")) return 2;
    if (boxed(arg) == param || boxed(param) == arg) return 2;
    if (param == "Object") return 1;
    if (is_subtype(arg, param, ctx)) return 2;
    return -1;
  }

  // Best applicable method; more specific score wins, earlier candidate wins ties.
  const MethodSource* select(const std::vector<const MethodSource*>& cands,
                             const std::vector<std::string>& args, const ClassEntry& ctx) const {
    const MethodSource* best = nullptr;
    long best_score = 0;
    for (const MethodSource* m : cands) {
      const auto& ps = m->params;
      long score = 0;
      bool ok = true;
      if (ps.size() == args.size()) {
        for (std::size_t i = 0; i < ps.size() && ok; ++i) {
          int s = arg_score(ps[i].type, args[i], ctx);
          if (s < 0) ok = false;
          score += s;
        }
      } else if (!ps.empty() && ps.back().type.size() > 2 &&
                 ps.back().type.compare(ps.back().type.size() - 2, 2, "[]") == 0 &&
                 args.size() + 1 >= ps.size()) {
        for (std::size_t i = 0; i + 1 < ps.size() && ok; ++i) {
          int s = arg_score(ps[i].type, args[i], ctx);
          if (s < 0) ok = false;
          score += s;
        }
        score -= 1000;  // variable arity only when nothing fixed applies
      } else {
        ok = false;
      }
      if (ok && (!best || score > best_score)) {
        best = m;
        best_score = score;
      }
    }
    return best;
  }

  const MethodSource* find_method(const ClassEntry& cls, const std::string& name,
                                  const std::vector<std::string>& args, const ClassEntry& ctx) const {
    std::vector<const MethodSource*> cands;
    for (const ClassEntry* k : lineage(cls)) {
      for (const MethodSource* m : k->methods) {
        if (!m->is_constructor && m->name == name) cands.push_back(m);
      }
    }
    return select(cands, args, ctx);
  }

  const MethodSource* find_constructor(const ClassEntry& cls, const std::vector<std::string>& args,
                                       const ClassEntry& ctx) const {
    std::vector<const MethodSource*> cands;
    for (const MethodSource* m : cls.methods) {
      if (m->is_constructor) cands.push_back(m);
    }
    return select(cands, args, ctx);
  }

  const FieldInfo* find_field(const ClassEntry& cls, const std::string& name) const {
    for (const ClassEntry* k : lineage(cls)) {
      for (const FieldInfo& f : k->type->fields) {
        if (f.name == name) return &f;
      }
    }
    return nullptr;
  }

  const Catalog& catalog() const { return catalog_; }

 private:
  const Catalog& catalog_;
  std::deque<ClassEntry> entries_;
  std::map<EntityId, std::map<std::string, ClassEntry*>> by_dir_;
  std::map<EntityId, std::map<std::string, std::map<std::string, ClassEntry*>>> by_pkg_name_;
  std::map<std::string, std::map<std::string, ClassEntry*>> by_file_;
};

struct Resolution {
  const MethodSource* callee = nullptr;
  std::string qualifier;  // for API edges
  std::string name;
  std::vector<std::string> arg_types;
};

// Static typing and call resolution inside one method.
class MethodTyper {
 public:
  MethodTyper(const Resolver& r, const MethodSource& m, const ClassEntry& cls)
      : r_(r), m_(m), ast_(m.ast), cls_(cls), b_(bind_variables(m)) {}

  const std::string& lexeme(int n) const {
    return m_.tokens[static_cast<std::size_t>(ast_.node(n).token)].lexeme;
  }
  bool is(int n, std::string_view type) const { return ast_.node(n).type == type; }

  std::string declared_type(int var) const {
    const auto& v = b_.vars[static_cast<std::size_t>(var)];
    if (v.is_field) {
      const FieldInfo* f = r_.find_field(cls_, v.name);
      return f ? f->type : std::string{};
    }
    const int decl = v.decl_node;
    const int holder = ast_.parent(decl);
    std::string dims;
    bool varargs = false;
    for (int c : ast_.children(holder)) {
      if (!ast_.is_terminal(c)) continue;
      if (lexeme(c) == "[") dims += "[]";
      if (lexeme(c) == "...") varargs = true;
    }
    int type_owner = is(holder, node::Parameter) ? holder : ast_.parent(holder);
    for (int c : ast_.children(type_owner)) {
      if (is(c, node::Type)) {
        return erased_type_text(ast_, m_.tokens, c) + (varargs ? "[]" : "") + dims;
      }
    }
    return {};
  }

  static std::string literal_type(std::string_view type, const std::string& lx) {
    if (type == "StringLiteral") return "String";
    if (type == "CharLiteral") return "char";
    if (type == "BoolLiteral") return "boolean";
    if (type == "NullLiteral") return "null";
    const bool hex = lx.size() > 1 && lx[0] == '0' && (lx[1] == 'x' || lx[1] == 'X');
    const char last = lx.back();
    if (last == 'L' || last == 'l') return "long";
    if (!hex && (last == 'f' || last == 'F')) return "float";
    if (!hex && (last == 'd' || last == 'D')) return "double";
    if (!hex && lx.find_first_of(".eE") != std::string::npos) return "double";
    return "int";
  }

  std::string type_of(int n) {
    if (auto it = types_.find(n); it != types_.end()) return it->second;
    std::string t = compute_type(n);
    types_[n] = t;
    return t;
  }

  std::string compute_type(int n) {
    const std::string& t = ast_.node(n).type;
    auto kids = ast_.children(n);
    if (ast_.is_terminal(n)) {
      if (t == "Keyword") return lexeme(n) == "this" ? cls_.type->name : std::string{};
      if (t == "Identifier") {
        const int v = b_.var_of[static_cast<std::size_t>(n)];
        return v >= 0 ? declared_type(v) : std::string{};
      }
      if (t == "Operator" || t == "Separator") return {};
      return literal_type(t, lexeme(n));
    }
    if (t == node::EnclosedExpr) return type_of(kids[1]);
    if (t == node::AssignExpr) return type_of(kids[0]);
    if (t == node::PostfixExpr) return type_of(kids[0]);
    if (t == node::UnaryExpr) {
      const std::string& op = lexeme(kids[0]);
      if (op == "!") return "boolean";
      const std::string inner = type_of(kids[1]);
      if (op == "++" || op == "--") return inner;
      return numeric_rank(inner) ? promote(inner, "int") : inner;
    }
    if (t == node::BinaryExpr) {
      const std::string& op = lexeme(kids[1]);
      static const std::set<std::string> boolean_ops = {"==", "!=", "<",  ">",
                                                        "<=", ">=", "&&", "||"};
      if (boolean_ops.count(op)) return "boolean";
      const std::string a = type_of(kids[0]), b = type_of(kids[2]);
      if (op == "+" && (a == "String" || b == "String")) return "String";
      if (op == "<<" || op == ">>" || op == ">>>") return promote(a, "int");
      if ((op == "&" || op == "|" || op == "^") && a == "boolean" && b == "boolean") {
        return "boolean";
      }
      return promote(a, b);
    }
    if (t == node::ConditionalExpr) {
      std::string a = type_of(kids[2]);
      if (a.empty() || a == "null") a = type_of(kids[4]);
      return a;
    }
    if (t == node::ObjectCreationExpr) return erased_type_text(ast_, m_.tokens, kids[1]);
    if (t == node::ArrayCreationExpr) {
      std::string s = erased_type_text(ast_, m_.tokens, kids[1]);
      for (int c : kids) {
        if (ast_.is_terminal(c) && lexeme(c) == "[") s += "[]";
      }
      return s;
    }
    if (t == node::ArrayAccessExpr) {
      std::string a = type_of(kids[0]);
      if (a.size() > 2 && a.compare(a.size() - 2, 2, "[]") == 0) return a.substr(0, a.size() - 2);
      return {};
    }
    if (t == node::FieldAccessExpr) {
      const std::string& name = lexeme(kids[2]);
      if (ast_.is_terminal(kids[0]) && lexeme(kids[0]) == "this") {
        const FieldInfo* f = r_.find_field(cls_, name);
        return f ? f->type : std::string{};
      }
      const std::string recv = type_of(kids[0]);
      if (name == "length" && recv.size() > 2 && recv.compare(recv.size() - 2, 2, "[]") == 0) {
        return "int";
      }
      if (const ClassEntry* c = r_.resolve_type(recv, cls_)) {
        const FieldInfo* f = r_.find_field(*c, name);
        return f ? f->type : std::string{};
      }
      return {};
    }
    if (t == node::MethodCallExpr) {
      const Resolution& res = resolve(n);
      return res.callee ? res.callee->return_type : std::string{};
    }
    return {};
  }

  // Dotted text when `n` is a chain of identifiers none of which is a variable.
  std::optional<std::string> qualified_name(int n) const {
    if (ast_.is_terminal(n)) {
      if (!is(n, "Identifier") || b_.var_of[static_cast<std::size_t>(n)] >= 0) return std::nullopt;
      return lexeme(n);
    }
    if (!is(n, node::FieldAccessExpr)) return std::nullopt;
    auto kids = ast_.children(n);
    auto head = qualified_name(kids[0]);
    if (!head || b_.var_of[static_cast<std::size_t>(kids[2])] >= 0) return std::nullopt;
    return *head + "." + lexeme(kids[2]);
  }

  std::vector<std::string> arg_types(int args_node) {
    std::vector<std::string> out;
    for (int c : ast_.children(args_node)) {
      if (!is(c, "Separator")) out.push_back(type_of(c));
    }
    return out;
  }

  const Resolution& resolve(int n) {
    if (auto it = calls_.find(n); it != calls_.end()) return it->second;
    Resolution res;
    auto kids = ast_.children(n);
    if (is(n, node::ObjectCreationExpr)) {
      const std::string type = erased_type_text(ast_, m_.tokens, kids[1]);
      res.name = simple_name(type);
      res.qualifier = type;
      res.arg_types = arg_types(kids[2]);
      if (const ClassEntry* c = r_.resolve_type(type, cls_)) {
        res.callee = r_.find_constructor(*c, res.arg_types, cls_);
      }
    } else if (kids.size() == 2) {
      res.name = lexeme(kids[0]);
      res.arg_types = arg_types(kids[1]);
      res.callee = r_.find_method(cls_, res.name, res.arg_types, cls_);
      res.qualifier = cls_.type->superclass.empty() ? "?" : cls_.type->superclass;
    } else {
      const int recv = kids[0];
      res.name = lexeme(kids[2]);
      res.arg_types = arg_types(kids[3]);
      const ClassEntry* target = nullptr;
      if (ast_.is_terminal(recv) && lexeme(recv) == "this") {
        target = &cls_;
        res.qualifier = cls_.type->name;
      } else if (auto q = qualified_name(recv)) {
        target = r_.resolve_type(*q, cls_);
        res.qualifier = *q;
      } else {
        const std::string rt = type_of(recv);
        target = r_.resolve_type(rt, cls_);
        res.qualifier = rt.empty() ? "?" : rt;
      }
      if (target) res.callee = r_.find_method(*target, res.name, res.arg_types, cls_);
    }
    return calls_[n] = std::move(res);
  }

 private:
  const Resolver& r_;
  const MethodSource& m_;
  const Ast& ast_;
  const ClassEntry& cls_;
  VariableBinding b_;
  std::map<int, std::string> types_;
  std::map<int, Resolution> calls_;
};

std::string api_signature(const Resolution& r) {
  std::string s = r.qualifier + "." + r.name + "(";
  for (std::size_t i = 0; i < r.arg_types.size(); ++i) {
    if (i) s += ',';
    s += r.arg_types[i].empty() ? "?" : r.arg_types[i];
  }
  return s + ")";
}

}  // namespace

CallType classify_call(const Catalog& catalog, const EntityId& caller, const EntityId& callee) {
  const MethodMeta* a = catalog.find_method(caller);
  const MethodMeta* b = catalog.find_method(callee);
  if (!a || !b) return CallType::API;
  if (a->class_id == b->class_id) return CallType::Local;
  if (a->package_id == b->package_id) return CallType::Package;
  if (a->project_id == b->project_id) return CallType::Project;
  return CallType::API;
}

CallGraph build_callgraph(const Catalog& catalog, const std::vector<SourceFile>& files,
                          const CallGraphOptions& opts) {
  const Resolver resolver(catalog, files);
  std::vector<CallEdge> edges;
  for (const SourceFile& f : files) {
    for (const MethodSource& m : f.methods) {
      if (!catalog.find_method(m.method_id)) continue;
      const ClassEntry* cls = resolver.entry_for(m);
      if (!cls) continue;
      MethodTyper typer(resolver, m, *cls);
      for (int n = 0; n < static_cast<int>(m.ast.size()); ++n) {
        const std::string& t = m.ast.node(n).type;
        const bool ctor = t == node::ObjectCreationExpr;
        if (t != node::MethodCallExpr && !ctor) continue;
        if (ctor && !opts.include_constructors) continue;
        const Resolution& res = typer.resolve(n);
        const int site = call_site_node(m.ast, n);
        const Token& tok = m.tokens[static_cast<std::size_t>(m.ast.node(site).token)];
        CallEdge e;
        e.caller = m.method_id;
        e.line = tok.line;
        e.col = tok.col;
        const MethodMeta* callee_meta = res.callee ? catalog.find_method(res.callee->method_id) : nullptr;
        if (callee_meta) {
          e.callee = res.callee->method_id;
          e.callee_signature = res.callee->class_name + "." + res.callee->signature;
          e.call_type = classify_call(catalog, e.caller, e.callee);
        } else {
          e.callee_signature = api_signature(res);
          e.call_type = CallType::API;
        }
        edges.push_back(std::move(e));
      }
    }
  }
  return CallGraph(std::move(edges));
}

std::array<std::size_t, 4> call_type_counts(const CallGraph& g) {
  std::array<std::size_t, 4> counts{};
  for (const CallEdge& e : g.edges()) ++counts[static_cast<std::size_t>(e.call_type)];
  return counts;
}

std::array<double, 4> classify_distribution(const CallGraph& g) {
  if (g.edges().empty()) throw Error(ErrorKind::EmptyDistribution, "call graph has no edges");
  const auto counts = call_type_counts(g);
  std::array<double, 4> out{};
  const double total = static_cast<double>(g.edges().size());
  for (std::size_t i = 0; i < 4; ++i) out[i] = static_cast<double>(counts[i]) / total;
  return out;
}

void connectivity_props(const CallGraph& g, const Catalog& catalog, PropertyStore& store) {
  PropertyRows nupc, nucc, nmlc, nmnc;
  for (const MethodMeta& m : catalog.methods()) {
    std::set<EntityId> callers, callees;
    std::int64_t local = 0, nonlocal = 0;
    for (std::size_t i : g.outgoing(m.method_id)) {
      const CallEdge& e = g.edges()[i];
      if (e.resolved()) callees.insert(e.callee);
      if (e.call_type == CallType::Local) {
        ++local;
      } else {
        ++nonlocal;
      }
    }
    for (std::size_t i : g.incoming(m.method_id)) callers.insert(g.edges()[i].caller);
    nupc.emplace_back(m.method_id, static_cast<std::int64_t>(callers.size()));
    nucc.emplace_back(m.method_id, static_cast<std::int64_t>(callees.size()));
    nmlc.emplace_back(m.method_id, local);
    nmnc.emplace_back(m.method_id, nonlocal);
  }
  store.add_property("NUPC", nupc);
  store.add_property("NUCC", nucc);
  store.add_property("NMLC", nmlc);
  store.add_property("NMNC", nmnc);
}

ContextBundle n_hop_context(const CallGraph& g, const Catalog& catalog, const EntityId& center,
                            int n, Direction direction) {
  if (!catalog.find_method(center)) {
    throw Error(ErrorKind::NotFound, "unknown method " + center.hex());
  }
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "hop count must be non-negative");
  ContextBundle b;
  b.center = center;
  b.direction = direction;
  b.hop_sets.push_back({center});
  for (int k = 1; k <= n; ++k) {
    std::set<EntityId> next = b.hop_sets.back();
    for (const EntityId& id : b.hop_sets.back()) {
      const auto& idx = direction == Direction::Callees ? g.outgoing(id) : g.incoming(id);
      for (std::size_t i : idx) {
        const CallEdge& e = g.edges()[i];
        if (!e.resolved()) continue;
        next.insert(direction == Direction::Callees ? e.callee : e.caller);
      }
    }
    b.hop_sets.push_back(std::move(next));
  }
  return b;
}

FormalResolver make_formal_resolver(const CallGraph& g, const MethodSource& caller,
                                    const std::map<EntityId, const MethodSource*>& methods) {
  return [&g, &caller, &methods](int call_node) -> std::optional<std::vector<std::string>> {
    const int site = call_site_node(caller.ast, call_node);
    if (site < 0) return std::nullopt;
    const Token& tok = caller.tokens[static_cast<std::size_t>(caller.ast.node(site).token)];
    const CallEdge* e = g.find_site(caller.method_id, tok.line, tok.col);
    if (!e || !e->resolved()) return std::nullopt;
    auto it = methods.find(e->callee);
    if (it == methods.end()) return std::nullopt;
    std::vector<std::string> names;
    for (const ParamInfo& p : it->second->params) names.push_back(p.name);
    return names;
  };
}

void write_callgraph(const CallGraph& g, const std::filesystem::path& file) {
  std::vector<csv::Row> rows;
  for (const CallEdge& e : g.edges()) {
    rows.push_back({e.caller.hex(), e.callee.hex(), e.callee_signature,
                    std::string(to_string(e.call_type)), std::to_string(e.line),
                    std::to_string(e.col)});
  }
  csv::write_file(file, kCallGraphHeader, rows);
}

CallGraph read_callgraph(const std::filesystem::path& file) {
  const csv::Table t = csv::read_file(file, kCallGraphHeader);
  std::vector<CallEdge> edges;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    try {
      CallEdge e;
      e.caller = EntityId::from_hex(row[0]);
      if (!row[1].empty()) e.callee = EntityId::from_hex(row[1]);
      e.callee_signature = row[2];
      e.call_type = parse_call_type(row[3]);
      e.line = std::stoi(row[4]);
      e.col = std::stoi(row[5]);
      edges.push_back(std::move(e));
    } catch (const std::exception& ex) {
      throw PositionedError(ErrorKind::Parse, t.row_lines[r], 1, ex.what());
    }
  }
  return CallGraph(std::move(edges));
}

}  // namespace srcwb
