#include "srcwb/parser.hpp"

#include <algorithm>
#include <array>
#include <memory>

#include "srcwb/error.hpp"

namespace srcwb {

std::string_view terminal_type(TokenKind kind) {
  switch (kind) {
    case TokenKind::Keyword: return "Keyword";
    case TokenKind::Identifier: return "Identifier";
    case TokenKind::IntLiteral: return "IntLiteral";
    case TokenKind::StringLiteral: return "StringLiteral";
    case TokenKind::CharLiteral: return "CharLiteral";
    case TokenKind::BoolLiteral: return "BoolLiteral";
    case TokenKind::NullLiteral: return "NullLiteral";
    case TokenKind::Operator: return "Operator";
    case TokenKind::Separator: return "Separator";
  }
  return "Unknown";
}

namespace {

struct PNode {
  std::string_view type;
  int token = -1;
  std::vector<std::unique_ptr<PNode>> kids;
};
using P = std::unique_ptr<PNode>;

P mk(std::string_view type) {
  auto n = std::make_unique<PNode>();
  n->type = type;
  return n;
}

constexpr std::array<std::string_view, 8> kPrimitives = {"boolean", "byte",  "char", "short",
                                                         "int",     "long",  "float", "double"};
constexpr std::array<std::string_view, 12> kModifiers = {
    "public",    "protected", "private",  "static",       "final",     "abstract",
    "native",    "transient", "volatile", "synchronized", "strictfp",  "default"};
constexpr std::array<std::string_view, 12> kAssignOps = {
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="};
constexpr std::array<std::string_view, 16> kUnsupportedStatements = {
    "try",  "switch", "do",    "break", "continue", "throw",     "synchronized", "assert",
    "catch", "finally", "case", "default", "else",  "class",     "interface",    "enum"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& arr, std::string_view s) {
  return std::find(arr.begin(), arr.end(), s) != arr.end();
}

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : t_(tokens) {}

  P compilation_unit() {
    auto cu = mk(node::CompilationUnit);
    if (at_kw("package")) {
      auto p = mk(node::PackageDeclaration);
      take(*p);
      p->kids.push_back(qualified_name());
      expect_sep(*p, ";");
      cu->kids.push_back(std::move(p));
    }
    while (at_kw("import")) {
      auto im = mk(node::ImportDeclaration);
      take(*im);
      if (at_kw("static")) take(*im);
      im->kids.push_back(qualified_name());
      if (at_sep(".") && peek_is(1, TokenKind::Operator, "*")) {
        take(*im);
        take(*im);
      }
      expect_sep(*im, ";");
      cu->kids.push_back(std::move(im));
    }
    while (cur()) {
      if (at_sep(";")) {
        take(*cu);
      } else {
        cu->kids.push_back(type_declaration());
      }
    }
    return cu;
  }

 private:
  // ---- token helpers ------------------------------------------------------
  const Token* cur() const { return pos_ < t_.size() ? &t_[pos_] : nullptr; }
  const Token* peek(std::size_t k) const {
    return pos_ + k < t_.size() ? &t_[pos_ + k] : nullptr;
  }
  bool peek_is(std::size_t k, TokenKind kind, std::string_view text) const {
    const Token* t = peek(k);
    return t && t->kind == kind && t->lexeme == text;
  }
  bool at(TokenKind kind, std::string_view text) const { return peek_is(0, kind, text); }
  bool at_sep(std::string_view s) const { return at(TokenKind::Separator, s); }
  bool at_op(std::string_view s) const { return at(TokenKind::Operator, s); }
  bool at_kw(std::string_view s) const { return at(TokenKind::Keyword, s); }
  bool at_ident() const { return cur() && cur()->kind == TokenKind::Identifier; }
  bool at_primitive() const {
    return cur() && cur()->kind == TokenKind::Keyword && contains(kPrimitives, cur()->lexeme);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    if (const Token* t = cur()) {
      throw PositionedError(ErrorKind::Parse, t->line, t->col,
                            msg + ", found '" + t->lexeme + "'");
    }
    int line = t_.empty() ? 1 : t_.back().line;
    int col = t_.empty() ? 1 : t_.back().col;
    throw PositionedError(ErrorKind::Parse, line, col, msg + ", found end of input");
  }

  P leaf() {
    auto n = std::make_unique<PNode>();
    n->type = terminal_type(t_[pos_].kind);
    n->token = static_cast<int>(pos_);
    ++pos_;
    return n;
  }
  void take(PNode& parent) { parent.kids.push_back(leaf()); }
  void expect_sep(PNode& parent, std::string_view s) {
    if (!at_sep(s)) fail("expected '" + std::string(s) + "'");
    take(parent);
  }
  void expect_ident(PNode& parent) {
    if (!at_ident()) fail("expected identifier");
    take(parent);
  }

  struct Mark {
    std::size_t pos;
    int pending_gt;
  };
  Mark mark() const { return {pos_, pending_gt_}; }
  void reset(Mark m) {
    pos_ = m.pos;
    pending_gt_ = m.pending_gt;
  }

  // ---- declarations -------------------------------------------------------
  P qualified_name() {
    auto q = mk(node::QualifiedName);
    expect_ident(*q);
    while (at_sep(".") && peek(1) && peek(1)->kind == TokenKind::Identifier) {
      take(*q);
      take(*q);
    }
    return q;
  }

  P annotation() {
    auto a = mk(node::Annotation);
    take(*a);  // '@'
    a->kids.push_back(qualified_name());
    if (at_sep("(")) {
      auto args = mk(node::AnnotationArguments);
      take(*args);
      if (!at_sep(")")) {
        args->kids.push_back(element_value());
        while (at_sep(",")) {
          take(*args);
          args->kids.push_back(element_value());
        }
      }
      expect_sep(*args, ")");
      a->kids.push_back(std::move(args));
    }
    return a;
  }

  P element_value() { return at_sep("{") ? array_initializer() : expression(); }

  P modifiers() {
    auto m = mk(node::Modifiers);
    while (cur()) {
      if (at_sep("@")) {
        if (peek_is(1, TokenKind::Keyword, "interface")) fail("annotation types are not supported");
        m->kids.push_back(annotation());
      } else if (cur()->kind == TokenKind::Keyword && contains(kModifiers, cur()->lexeme)) {
        take(*m);
      } else {
        break;
      }
    }
    if (m->kids.empty()) return nullptr;
    return m;
  }

  P type_declaration() {
    P mods = modifiers();
    if (at_kw("class")) return class_declaration(std::move(mods));
    if (at_kw("interface")) return interface_declaration(std::move(mods));
    if (at_kw("enum")) fail("enum declarations are not supported");
    fail("expected class or interface declaration");
  }

  P class_declaration(P mods) {
    auto c = mk(node::ClassDeclaration);
    if (mods) c->kids.push_back(std::move(mods));
    take(*c);  // 'class'
    if (!at_ident()) fail("expected class name");
    std::string name = cur()->lexeme;
    take(*c);
    if (at_op("<")) c->kids.push_back(type_parameters());
    if (at_kw("extends")) {
      auto e = mk(node::ExtendsClause);
      take(*e);
      e->kids.push_back(type());
      c->kids.push_back(std::move(e));
    }
    if (at_kw("implements")) {
      auto im = mk(node::ImplementsClause);
      take(*im);
      im->kids.push_back(type());
      while (at_sep(",")) {
        take(*im);
        im->kids.push_back(type());
      }
      c->kids.push_back(std::move(im));
    }
    c->kids.push_back(class_body(name));
    return c;
  }

  P interface_declaration(P mods) {
    auto c = mk(node::InterfaceDeclaration);
    if (mods) c->kids.push_back(std::move(mods));
    take(*c);  // 'interface'
    if (!at_ident()) fail("expected interface name");
    std::string name = cur()->lexeme;
    take(*c);
    if (at_op("<")) c->kids.push_back(type_parameters());
    if (at_kw("extends")) {
      auto e = mk(node::ExtendsClause);
      take(*e);
      e->kids.push_back(type());
      while (at_sep(",")) {
        take(*e);
        e->kids.push_back(type());
      }
      c->kids.push_back(std::move(e));
    }
    c->kids.push_back(class_body(name));
    return c;
  }

  P class_body(const std::string& class_name) {
    auto body = mk(node::ClassBody);
    expect_sep(*body, "{");
    while (cur() && !at_sep("}")) {
      if (at_sep(";")) {
        take(*body);
        continue;
      }
      if (at_sep("{") || (at_kw("static") && peek_is(1, TokenKind::Separator, "{"))) {
        auto init = mk(node::Initializer);
        if (at_kw("static")) take(*init);
        init->kids.push_back(block());
        body->kids.push_back(std::move(init));
        continue;
      }
      body->kids.push_back(member(class_name));
    }
    expect_sep(*body, "}");
    return body;
  }

  P member(const std::string& class_name) {
    P mods = modifiers();
    if (at_kw("class")) return class_declaration(std::move(mods));
    if (at_kw("interface")) return interface_declaration(std::move(mods));
    if (at_kw("enum")) fail("enum declarations are not supported");

    P tparams;
    if (at_op("<")) tparams = type_parameters();

    if (at_ident() && cur()->lexeme == class_name && peek_is(1, TokenKind::Separator, "(")) {
      auto ctor = mk(node::ConstructorDeclaration);
      if (mods) ctor->kids.push_back(std::move(mods));
      if (tparams) ctor->kids.push_back(std::move(tparams));
      take(*ctor);
      method_rest(*ctor, /*allow_abstract=*/false);
      return ctor;
    }

    P result = at_kw("void") ? void_type() : type();
    if (!at_ident()) fail("expected member name");
    if (peek_is(1, TokenKind::Separator, "(")) {
      auto m = mk(node::MethodDeclaration);
      if (mods) m->kids.push_back(std::move(mods));
      if (tparams) m->kids.push_back(std::move(tparams));
      m->kids.push_back(std::move(result));
      take(*m);
      method_rest(*m, /*allow_abstract=*/true);
      return m;
    }
    if (tparams) fail("type parameters on a field declaration");
    auto f = mk(node::FieldDeclaration);
    if (mods) f->kids.push_back(std::move(mods));
    f->kids.push_back(std::move(result));
    f->kids.push_back(variable_declarator());
    while (at_sep(",")) {
      take(*f);
      f->kids.push_back(variable_declarator());
    }
    expect_sep(*f, ";");
    return f;
  }

  void method_rest(PNode& m, bool allow_abstract) {
    m.kids.push_back(formal_parameters());
    while (at_sep("[") && peek_is(1, TokenKind::Separator, "]")) {
      take(m);
      take(m);
    }
    if (at_kw("throws")) {
      auto th = mk(node::ThrowsClause);
      take(*th);
      th->kids.push_back(type());
      while (at_sep(",")) {
        take(*th);
        th->kids.push_back(type());
      }
      m.kids.push_back(std::move(th));
    }
    if (at_sep("{")) {
      m.kids.push_back(block());
    } else if (allow_abstract && at_sep(";")) {
      take(m);
    } else {
      fail("expected method body");
    }
  }

  P formal_parameters() {
    auto fp = mk(node::FormalParameters);
    expect_sep(*fp, "(");
    if (!at_sep(")")) {
      fp->kids.push_back(parameter());
      while (at_sep(",")) {
        take(*fp);
        fp->kids.push_back(parameter());
      }
    }
    expect_sep(*fp, ")");
    return fp;
  }

  P parameter() {
    auto p = mk(node::Parameter);
    if (P mods = modifiers()) p->kids.push_back(std::move(mods));
    p->kids.push_back(type());
    if (at_sep("...")) take(*p);
    expect_ident(*p);
    while (at_sep("[") && peek_is(1, TokenKind::Separator, "]")) {
      take(*p);
      take(*p);
    }
    return p;
  }

  P type_parameters() {
    auto tp = mk(node::TypeParameters);
    take(*tp);  // '<'
    auto one = [&] {
      auto p = mk(node::TypeParameter);
      expect_ident(*p);
      if (at_kw("extends")) {
        take(*p);
        p->kids.push_back(type());
        while (at_op("&")) {
          take(*p);
          p->kids.push_back(type());
        }
      }
      return p;
    };
    tp->kids.push_back(one());
    while (at_sep(",")) {
      take(*tp);
      tp->kids.push_back(one());
    }
    close_angle(*tp);
    return tp;
  }

  // ---- types --------------------------------------------------------------
  P void_type() {
    auto t = mk(node::Type);
    take(*t);
    return t;
  }

  P type(bool allow_dims = true) {
    auto t = mk(node::Type);
    if (at_primitive()) {
      take(*t);
    } else if (at_ident()) {
      take(*t);
      if (at_op("<")) t->kids.push_back(type_arguments());
      while (at_sep(".") && peek(1) && peek(1)->kind == TokenKind::Identifier) {
        take(*t);
        take(*t);
        if (at_op("<")) t->kids.push_back(type_arguments());
      }
    } else {
      fail("expected type");
    }
    if (allow_dims) {
      while (at_sep("[") && peek_is(1, TokenKind::Separator, "]")) {
        take(*t);
        take(*t);
      }
    }
    return t;
  }

  P type_arguments() {
    auto ta = mk(node::TypeArguments);
    take(*ta);  // '<'
    if (at_op(">")) {  // diamond
      take(*ta);
      return ta;
    }
    auto arg = [&]() -> P {
      if (at_op("?")) {
        auto t = mk(node::Type);
        take(*t);
        if (at_kw("extends") || at_kw("super")) {
          take(*t);
          t->kids.push_back(type());
        }
        return t;
      }
      return type();
    };
    ta->kids.push_back(arg());
    while (at_sep(",")) {
      take(*ta);
      ta->kids.push_back(arg());
    }
    close_angle(*ta);
    return ta;
  }

  // '>>' and '>>>' close several nested argument lists with one token; the
  // token is kept on the innermost list and the outer lists consume nothing.
  void close_angle(PNode& n) {
    if (pending_gt_ > 0) {
      --pending_gt_;
      return;
    }
    if (at_op(">")) {
      take(n);
    } else if (at_op(">>")) {
      take(n);
      pending_gt_ += 1;
    } else if (at_op(">>>")) {
      take(n);
      pending_gt_ += 2;
    } else {
      fail("expected '>'");
    }
  }

  P try_type() {
    Mark m = mark();
    try {
      return type();
    } catch (const PositionedError&) {
      reset(m);
      return nullptr;
    }
  }

  // Type followed by an identifier and a declarator continuation.
  bool local_var_decl_ahead() {
    Mark m = mark();
    bool ok = false;
    if (at_ident() || at_primitive()) {
      P t = try_type();
      if (t && pending_gt_ == 0 && at_ident()) {
        const Token* n = peek(1);
        ok = n && n->kind == TokenKind::Separator &&
             (n->lexeme == ";" || n->lexeme == "," || n->lexeme == "[" || n->lexeme == ":");
        ok = ok || (n && n->kind == TokenKind::Operator && n->lexeme == "=");
      }
    }
    reset(m);
    return ok;
  }

  // ---- statements ---------------------------------------------------------
  P block() {
    auto b = mk(node::BlockStmt);
    expect_sep(*b, "{");
    while (cur() && !at_sep("}")) b->kids.push_back(statement());
    expect_sep(*b, "}");
    return b;
  }

  P statement() {
    if (!cur()) fail("expected statement");
    if (at_sep("{")) return block();
    if (at_sep(";")) {
      auto e = mk(node::EmptyStmt);
      take(*e);
      return e;
    }
    if (at_kw("if")) return if_statement();
    if (at_kw("while")) return while_statement();
    if (at_kw("for")) return for_statement();
    if (at_kw("return")) {
      auto r = mk(node::ReturnStmt);
      take(*r);
      if (!at_sep(";")) r->kids.push_back(expression());
      expect_sep(*r, ";");
      return r;
    }
    if (cur()->kind == TokenKind::Keyword && contains(kUnsupportedStatements, cur()->lexeme)) {
      fail("unsupported statement '" + cur()->lexeme + "'");
    }
    if (at_kw("final") || at_sep("@") || local_var_decl_ahead()) {
      return local_var_decl(/*with_semicolon=*/true);
    }
    auto s = mk(node::ExpressionStmt);
    s->kids.push_back(expression());
    expect_sep(*s, ";");
    return s;
  }

  P local_var_decl(bool with_semicolon) {
    auto d = mk(node::LocalVarDecl);
    if (P mods = modifiers()) d->kids.push_back(std::move(mods));
    d->kids.push_back(type());
    d->kids.push_back(variable_declarator());
    while (at_sep(",")) {
      take(*d);
      d->kids.push_back(variable_declarator());
    }
    if (with_semicolon) expect_sep(*d, ";");
    return d;
  }

  P variable_declarator() {
    auto v = mk(node::VariableDeclarator);
    expect_ident(*v);
    while (at_sep("[") && peek_is(1, TokenKind::Separator, "]")) {
      take(*v);
      take(*v);
    }
    if (at_sep(":")) fail("enhanced for loops are not supported");
    if (at_op("=")) {
      take(*v);
      v->kids.push_back(at_sep("{") ? array_initializer() : expression());
    }
    return v;
  }

  P array_initializer() {
    auto a = mk(node::ArrayInitializer);
    expect_sep(*a, "{");
    while (cur() && !at_sep("}")) {
      a->kids.push_back(element_value());
      if (!at_sep(",")) break;
      take(*a);
    }
    expect_sep(*a, "}");
    return a;
  }

  P condition() {
    auto c = mk(node::Condition);
    c->kids.push_back(expression());
    return c;
  }

  P if_statement() {
    auto s = mk(node::IfStmt);
    take(*s);
    expect_sep(*s, "(");
    s->kids.push_back(condition());
    expect_sep(*s, ")");
    s->kids.push_back(statement());
    if (at_kw("else")) {
      take(*s);
      s->kids.push_back(statement());
    }
    return s;
  }

  P while_statement() {
    auto s = mk(node::WhileStmt);
    take(*s);
    expect_sep(*s, "(");
    s->kids.push_back(condition());
    expect_sep(*s, ")");
    s->kids.push_back(statement());
    return s;
  }

  P for_statement() {
    auto s = mk(node::ForStmt);
    take(*s);
    expect_sep(*s, "(");
    if (!at_sep(";")) {
      auto init = mk(node::ForInit);
      if (at_kw("final") || local_var_decl_ahead()) {
        init->kids.push_back(local_var_decl(/*with_semicolon=*/false));
      } else {
        init->kids.push_back(expression());
        while (at_sep(",")) {
          take(*init);
          init->kids.push_back(expression());
        }
      }
      s->kids.push_back(std::move(init));
    }
    if (at_sep(":")) fail("enhanced for loops are not supported");
    expect_sep(*s, ";");
    if (!at_sep(";")) s->kids.push_back(condition());
    expect_sep(*s, ";");
    if (!at_sep(")")) {
      auto upd = mk(node::ForUpdate);
      upd->kids.push_back(expression());
      while (at_sep(",")) {
        take(*upd);
        upd->kids.push_back(expression());
      }
      s->kids.push_back(std::move(upd));
    }
    expect_sep(*s, ")");
    s->kids.push_back(statement());
    return s;
  }

  // ---- expressions --------------------------------------------------------
  P expression() {
    P lhs = conditional();
    if (cur() && cur()->kind == TokenKind::Operator && contains(kAssignOps, cur()->lexeme)) {
      std::string_view t = lhs->type;
      if (t != terminal_type(TokenKind::Identifier) && t != node::FieldAccessExpr &&
          t != node::ArrayAccessExpr) {
        fail("invalid assignment target");
      }
      auto a = mk(node::AssignExpr);
      a->kids.push_back(std::move(lhs));
      take(*a);
      a->kids.push_back(expression());
      return a;
    }
    return lhs;
  }

  P conditional() {
    P c = binary(0);
    if (at_op("?")) {
      auto n = mk(node::ConditionalExpr);
      n->kids.push_back(std::move(c));
      take(*n);
      n->kids.push_back(expression());
      if (!at_op(":")) fail("expected ':'");
      take(*n);
      n->kids.push_back(conditional());
      return n;
    }
    return c;
  }

  static const std::vector<std::vector<std::string_view>>& levels() {
    static const std::vector<std::vector<std::string_view>> kLevels = {
        {"||"}, {"&&"}, {"|"}, {"^"}, {"&"}, {"==", "!="}, {"<", ">", "<=", ">="},
        {"<<", ">>", ">>>"}, {"+", "-"}, {"*", "/", "%"}};
    return kLevels;
  }

  P binary(std::size_t level) {
    if (level == levels().size()) return unary();
    P lhs = binary(level + 1);
    while (true) {
      if (at_kw("instanceof")) fail("instanceof is not supported");
      const Token* t = cur();
      if (!t || t->kind != TokenKind::Operator) break;
      const auto& ops = levels()[level];
      if (std::find(ops.begin(), ops.end(), t->lexeme) == ops.end()) break;
      auto n = mk(node::BinaryExpr);
      n->kids.push_back(std::move(lhs));
      take(*n);
      n->kids.push_back(binary(level + 1));
      lhs = std::move(n);
    }
    return lhs;
  }

  P unary() {
    if (at_op("+") || at_op("-") || at_op("++") || at_op("--") || at_op("!") || at_op("~")) {
      auto n = mk(node::UnaryExpr);
      take(*n);
      n->kids.push_back(unary());
      return n;
    }
    if (at_sep("(") && peek(1) && peek(1)->kind == TokenKind::Keyword &&
        contains(kPrimitives, peek(1)->lexeme)) {
      fail("casts are not supported");
    }
    P e = postfix();
    return e;
  }

  P postfix() {
    P e = primary();
    while (true) {
      if (at_sep(".")) {
        const Token* n = peek(1);
        if (!n || n->kind != TokenKind::Identifier) {
          pos_ += 1;
          fail("unsupported member selection");
        }
        if (peek_is(2, TokenKind::Separator, "(")) {
          auto call = mk(node::MethodCallExpr);
          call->kids.push_back(std::move(e));
          take(*call);
          take(*call);
          call->kids.push_back(arguments());
          e = std::move(call);
        } else {
          auto fa = mk(node::FieldAccessExpr);
          fa->kids.push_back(std::move(e));
          take(*fa);
          take(*fa);
          e = std::move(fa);
        }
      } else if (at_sep("[")) {
        auto aa = mk(node::ArrayAccessExpr);
        aa->kids.push_back(std::move(e));
        take(*aa);
        aa->kids.push_back(expression());
        expect_sep(*aa, "]");
        e = std::move(aa);
      } else if (at_sep("::")) {
        fail("method references are not supported");
      } else {
        break;
      }
    }
    while (at_op("++") || at_op("--")) {
      auto p = mk(node::PostfixExpr);
      p->kids.push_back(std::move(e));
      take(*p);
      e = std::move(p);
    }
    return e;
  }

  P primary() {
    const Token* t = cur();
    if (!t) fail("expected expression");
    if (t->is_literal()) return leaf();
    if (at_kw("this")) {
      if (peek_is(1, TokenKind::Separator, "(")) fail("explicit constructor calls are not supported");
      return leaf();
    }
    if (at_kw("super")) fail("'super' is not supported");
    if (at_kw("new")) return creation();
    if (at_ident()) {
      if (peek_is(1, TokenKind::Operator, "->")) fail("lambdas are not supported");
      if (peek_is(1, TokenKind::Separator, "(")) {
        auto call = mk(node::MethodCallExpr);
        take(*call);
        call->kids.push_back(arguments());
        return call;
      }
      return leaf();
    }
    if (at_sep("(")) {
      auto e = mk(node::EnclosedExpr);
      take(*e);
      if (at_sep(")")) fail("lambdas are not supported");
      e->kids.push_back(expression());
      expect_sep(*e, ")");
      if (at_op("->")) fail("lambdas are not supported");
      if (cur() && (at_ident() || cur()->is_literal() || at_sep("(")) &&
          e->kids[1]->type == terminal_type(TokenKind::Identifier)) {
        fail("casts are not supported");
      }
      return e;
    }
    fail("expected expression");
  }

  P creation() {
    Mark start = mark();
    auto kw = leaf();  // 'new'
    P t = type(/*allow_dims=*/false);
    if (at_sep("(")) {
      auto n = mk(node::ObjectCreationExpr);
      n->kids.push_back(std::move(kw));
      n->kids.push_back(std::move(t));
      n->kids.push_back(arguments());
      if (at_sep("{")) fail("anonymous classes are not supported");
      return n;
    }
    if (at_sep("[")) {
      auto n = mk(node::ArrayCreationExpr);
      n->kids.push_back(std::move(kw));
      n->kids.push_back(std::move(t));
      while (at_sep("[")) {
        take(*n);
        if (!at_sep("]")) n->kids.push_back(expression());
        expect_sep(*n, "]");
      }
      if (at_sep("{")) n->kids.push_back(array_initializer());
      return n;
    }
    (void)start;
    fail("expected '(' or '[' after type in creation expression");
  }

  P arguments() {
    auto a = mk(node::Arguments);
    expect_sep(*a, "(");
    if (!at_sep(")")) {
      a->kids.push_back(expression());
      while (at_sep(",")) {
        take(*a);
        a->kids.push_back(expression());
      }
    }
    expect_sep(*a, ")");
    return a;
  }

  const std::vector<Token>& t_;
  std::size_t pos_ = 0;
  int pending_gt_ = 0;
};

// Returns the first token index within the subtree (or -1).
int flatten(const PNode& n, int parent, const std::vector<Token>& tokens,
            std::vector<AstNode>& out) {
  const int idx = static_cast<int>(out.size());
  out.push_back(AstNode{std::string(n.type), n.token, 0, 0, parent});
  int first = n.token;
  for (const auto& k : n.kids) {
    int f = flatten(*k, idx, tokens, out);
    if (first < 0) first = f;
  }
  if (first >= 0) {
    out[static_cast<std::size_t>(idx)].line = tokens[static_cast<std::size_t>(first)].line;
    out[static_cast<std::size_t>(idx)].col = tokens[static_cast<std::size_t>(first)].col;
  }
  return first;
}

// ---- declaration summaries ------------------------------------------------

int child_of_type(const Ast& ast, int n, std::string_view type) {
  for (int c : ast.children(n)) {
    if (ast.node(c).type == type) return c;
  }
  return -1;
}

const std::string& lexeme(const Ast& ast, const std::vector<Token>& toks, int n) {
  return toks[static_cast<std::size_t>(ast.node(n).token)].lexeme;
}

// Erased type text: identifiers, dots, primitives and dims; type arguments dropped.
std::string type_text(const Ast& ast, const std::vector<Token>& toks, int type_node) {
  std::string out;
  for (int i = type_node; i < ast.subtree_end(type_node); ++i) {
    if (ast.node(i).type == node::TypeArguments) {
      i = ast.subtree_end(i) - 1;
      continue;
    }
    if (!ast.is_terminal(i)) continue;
    if (ast.parent(i) != type_node) continue;
    out += lexeme(ast, toks, i);
  }
  return out;
}

std::string qualified_text(const Ast& ast, const std::vector<Token>& toks, int qn) {
  std::string out;
  for (int c : ast.children(qn)) out += lexeme(ast, toks, c);
  return out;
}

std::string trailing_dims(const Ast& ast, const std::vector<Token>& toks, int n) {
  std::string out;
  for (int c : ast.children(n)) {
    if (ast.is_terminal(c) && lexeme(ast, toks, c) == "[") out += "[]";
  }
  return out;
}

int first_token(const Ast& ast, int n) {
  for (int i = n; i < ast.subtree_end(n); ++i) {
    if (ast.is_terminal(i)) return ast.node(i).token;
  }
  return -1;
}

int last_token(const Ast& ast, int n) {
  for (int i = ast.subtree_end(n) - 1; i >= n; --i) {
    if (ast.is_terminal(i)) return ast.node(i).token;
  }
  return -1;
}

MethodInfo summarize_method(const Ast& ast, const std::vector<Token>& toks, int n) {
  MethodInfo m;
  m.node = n;
  m.is_constructor = ast.node(n).type == node::ConstructorDeclaration;
  for (int c : ast.children(n)) {
    const AstNode& cn = ast.node(c);
    if (cn.type == terminal_type(TokenKind::Identifier) && m.name.empty()) {
      m.name = lexeme(ast, toks, c);
    } else if (cn.type == node::Type) {
      m.return_type = type_text(ast, toks, c);
    } else if (cn.type == node::BlockStmt) {
      m.has_body = true;
    } else if (cn.type == node::FormalParameters) {
      for (int p : ast.children(c)) {
        if (ast.node(p).type != node::Parameter) continue;
        ParamInfo pi;
        bool varargs = false;
        for (int pc : ast.children(p)) {
          if (ast.node(pc).type == node::Type) {
            pi.type = type_text(ast, toks, pc);
          } else if (ast.is_terminal(pc) && lexeme(ast, toks, pc) == "...") {
            varargs = true;
          } else if (ast.node(pc).type == terminal_type(TokenKind::Identifier)) {
            pi.name = lexeme(ast, toks, pc);
          }
        }
        if (varargs) pi.type += "[]";
        pi.type += trailing_dims(ast, toks, p);
        m.params.push_back(std::move(pi));
      }
    }
  }
  if (!m.is_constructor) m.return_type += trailing_dims(ast, toks, n);
  m.first_token = first_token(ast, n);
  m.last_token = last_token(ast, n);
  m.start_line = toks[static_cast<std::size_t>(m.first_token)].line;
  m.end_line = toks[static_cast<std::size_t>(m.last_token)].line;
  m.signature = make_signature(m.name, m.params);
  return m;
}

TypeInfo summarize_type(const Ast& ast, const std::vector<Token>& toks, int n) {
  TypeInfo t;
  t.node = n;
  t.is_interface = ast.node(n).type == node::InterfaceDeclaration;
  for (int c : ast.children(n)) {
    const AstNode& cn = ast.node(c);
    if (cn.type == terminal_type(TokenKind::Identifier) && t.name.empty()) {
      t.name = lexeme(ast, toks, c);
    } else if (cn.type == node::ExtendsClause) {
      for (int e : ast.children(c)) {
        if (ast.node(e).type != node::Type) continue;
        if (t.is_interface) {
          t.interfaces.push_back(type_text(ast, toks, e));
        } else {
          t.superclass = type_text(ast, toks, e);
        }
      }
    } else if (cn.type == node::ImplementsClause) {
      for (int e : ast.children(c)) {
        if (ast.node(e).type == node::Type) t.interfaces.push_back(type_text(ast, toks, e));
      }
    } else if (cn.type == node::ClassBody) {
      for (int m : ast.children(c)) {
        const std::string& mt = ast.node(m).type;
        if (mt == node::MethodDeclaration || mt == node::ConstructorDeclaration) {
          t.methods.push_back(summarize_method(ast, toks, m));
        } else if (mt == node::FieldDeclaration) {
          int ty = child_of_type(ast, m, node::Type);
          std::string base = type_text(ast, toks, ty);
          for (int d : ast.children(m)) {
            if (ast.node(d).type != node::VariableDeclarator) continue;
            int id = ast.children(d)[0];
            t.fields.push_back(FieldInfo{lexeme(ast, toks, id), base + trailing_dims(ast, toks, d),
                                         ast.node(id).line});
          }
        }
      }
    }
  }
  return t;
}

}  // namespace

CompilationUnit parse(std::string_view source) {
  CompilationUnit unit;
  unit.tokens = lex(source);
  Parser parser(unit.tokens);
  P root = parser.compilation_unit();
  std::vector<AstNode> nodes;
  flatten(*root, -1, unit.tokens, nodes);
  unit.ast = Ast(std::move(nodes));

  const Ast& ast = unit.ast;
  for (int c : ast.children(0)) {
    const std::string& type = ast.node(c).type;
    if (type == node::PackageDeclaration) {
      unit.package_name = qualified_text(ast, unit.tokens, child_of_type(ast, c, node::QualifiedName));
    } else if (type == node::ImportDeclaration) {
      ImportInfo im;
      im.name = qualified_text(ast, unit.tokens, child_of_type(ast, c, node::QualifiedName));
      for (int k : ast.children(c)) {
        if (!ast.is_terminal(k)) continue;
        const std::string& lx = lexeme(ast, unit.tokens, k);
        if (lx == "*") im.wildcard = true;
        if (lx == "static") im.is_static = true;
      }
      unit.imports.push_back(std::move(im));
    } else if (type == node::ClassDeclaration || type == node::InterfaceDeclaration) {
      unit.types.push_back(summarize_type(ast, unit.tokens, c));
    }
  }
  return unit;
}

std::string make_signature(std::string_view name, const std::vector<ParamInfo>& params) {
  std::string sig(name);
  sig.push_back('(');
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) sig.push_back(',');
    sig += params[i].type;
  }
  sig.push_back(')');
  return sig;
}

ParsedSignature parse_signature(std::string_view signature) {
  auto open = signature.find('(');
  if (open == std::string_view::npos || open == 0 || signature.back() != ')') {
    throw Error(ErrorKind::InvalidArgument, "malformed signature '" + std::string(signature) + "'");
  }
  ParsedSignature out;
  out.name = std::string(signature.substr(0, open));
  std::string_view inner = signature.substr(open + 1, signature.size() - open - 2);
  if (!inner.empty()) {
    std::size_t start = 0;
    while (true) {
      auto comma = inner.find(',', start);
      std::string_view part = inner.substr(start, comma == std::string_view::npos
                                                      ? std::string_view::npos
                                                      : comma - start);
      if (part.empty()) {
        throw Error(ErrorKind::InvalidArgument,
                    "empty parameter type in '" + std::string(signature) + "'");
      }
      out.param_types.emplace_back(part);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

std::string slice_lines(std::string_view source, int start_line, int end_line) {
  std::size_t begin = 0;
  int line = 1;
  while (line < start_line) {
    auto nl = source.find('\n', begin);
    if (nl == std::string_view::npos) return {};
    begin = nl + 1;
    ++line;
  }
  std::size_t end = begin;
  while (true) {
    auto nl = source.find('\n', end);
    if (nl == std::string_view::npos) {
      end = source.size();
      break;
    }
    if (line == end_line) {
      end = nl;
      break;
    }
    end = nl + 1;
    ++line;
  }
  if (end > begin && source[end - 1] == '\r') --end;
  return std::string(source.substr(begin, end - begin));
}

std::vector<MethodSource> extract_methods(const CompilationUnit& unit, std::string_view source,
                                          std::string_view file_relpath) {
  std::vector<MethodSource> out;
  for (const TypeInfo& type : unit.types) {
    for (const MethodInfo& m : type.methods) {
      MethodSource ms;
      ms.name = m.name;
      ms.signature = m.signature;
      ms.file_relpath = std::string(file_relpath);
      ms.start_line = m.start_line;
      ms.end_line = m.end_line;
      ms.text = slice_lines(source, m.start_line, m.end_line);
      ms.tokens.assign(unit.tokens.begin() + m.first_token, unit.tokens.begin() + m.last_token + 1);
      ms.ast = unit.ast.subtree(m.node, m.first_token);
      ms.params = m.params;
      ms.return_type = m.return_type;
      ms.is_constructor = m.is_constructor;
      ms.has_body = m.has_body;
      ms.class_name = type.name;
      ms.class_fields = type.fields;
      ms.method_id = assign_id(EntityKind::Method, method_key(file_relpath, m.signature, m.start_line));
      out.push_back(std::move(ms));
    }
  }
  return out;
}

std::string erased_type_text(const Ast& ast, const std::vector<Token>& tokens, int type_node) {
  return type_text(ast, tokens, type_node);
}

std::string subtree_text(const Ast& ast, const std::vector<Token>& tokens, int n) {
  std::string out;
  for (int i = n; i < ast.subtree_end(n); ++i) {
    if (!ast.is_terminal(i)) continue;
    if (!out.empty()) out.push_back(' ');
    out += tokens[static_cast<std::size_t>(ast.node(i).token)].lexeme;
  }
  return out;
}

}  // namespace srcwb
