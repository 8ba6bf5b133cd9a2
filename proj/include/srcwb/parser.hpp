#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srcwb/ast.hpp"
#include "srcwb/entity_id.hpp"
#include "srcwb/lexer.hpp"

namespace srcwb {

// Nonterminal vocabulary. Terminals use the token-kind names below.
namespace node {
inline constexpr std::string_view CompilationUnit = "CompilationUnit";
inline constexpr std::string_view PackageDeclaration = "PackageDeclaration";
inline constexpr std::string_view ImportDeclaration = "ImportDeclaration";
inline constexpr std::string_view QualifiedName = "QualifiedName";
inline constexpr std::string_view ClassDeclaration = "ClassDeclaration";
inline constexpr std::string_view InterfaceDeclaration = "InterfaceDeclaration";
inline constexpr std::string_view ExtendsClause = "ExtendsClause";
inline constexpr std::string_view ImplementsClause = "ImplementsClause";
inline constexpr std::string_view ClassBody = "ClassBody";
inline constexpr std::string_view Initializer = "Initializer";
inline constexpr std::string_view Modifiers = "Modifiers";
inline constexpr std::string_view Annotation = "Annotation";
inline constexpr std::string_view AnnotationArguments = "AnnotationArguments";
inline constexpr std::string_view TypeParameters = "TypeParameters";
inline constexpr std::string_view TypeParameter = "TypeParameter";
inline constexpr std::string_view Type = "Type";
inline constexpr std::string_view TypeArguments = "TypeArguments";
inline constexpr std::string_view FieldDeclaration = "FieldDeclaration";
inline constexpr std::string_view VariableDeclarator = "VariableDeclarator";
inline constexpr std::string_view ArrayInitializer = "ArrayInitializer";
inline constexpr std::string_view MethodDeclaration = "MethodDeclaration";
inline constexpr std::string_view ConstructorDeclaration = "ConstructorDeclaration";
inline constexpr std::string_view FormalParameters = "FormalParameters";
inline constexpr std::string_view Parameter = "Parameter";
inline constexpr std::string_view ThrowsClause = "ThrowsClause";
inline constexpr std::string_view BlockStmt = "BlockStmt";
inline constexpr std::string_view LocalVarDecl = "LocalVarDecl";
inline constexpr std::string_view IfStmt = "IfStmt";
inline constexpr std::string_view WhileStmt = "WhileStmt";
inline constexpr std::string_view ForStmt = "ForStmt";
inline constexpr std::string_view ForInit = "ForInit";
inline constexpr std::string_view ForUpdate = "ForUpdate";
inline constexpr std::string_view Condition = "Condition";
inline constexpr std::string_view ReturnStmt = "ReturnStmt";
inline constexpr std::string_view ExpressionStmt = "ExpressionStmt";
inline constexpr std::string_view EmptyStmt = "EmptyStmt";
inline constexpr std::string_view AssignExpr = "AssignExpr";
inline constexpr std::string_view ConditionalExpr = "ConditionalExpr";
inline constexpr std::string_view BinaryExpr = "BinaryExpr";
inline constexpr std::string_view UnaryExpr = "UnaryExpr";
inline constexpr std::string_view PostfixExpr = "PostfixExpr";
inline constexpr std::string_view EnclosedExpr = "EnclosedExpr";
inline constexpr std::string_view FieldAccessExpr = "FieldAccessExpr";
inline constexpr std::string_view MethodCallExpr = "MethodCallExpr";
inline constexpr std::string_view Arguments = "Arguments";
inline constexpr std::string_view ObjectCreationExpr = "ObjectCreationExpr";
inline constexpr std::string_view ArrayCreationExpr = "ArrayCreationExpr";
inline constexpr std::string_view ArrayAccessExpr = "ArrayAccessExpr";
}  // namespace node

/// Terminal node type for a token: "Keyword", "Identifier", "IntLiteral", ...
std::string_view terminal_type(TokenKind kind);

struct FieldInfo {
  std::string name;
  std::string type;  // erased type text, e.g. "List", "int[]"
  int line = 0;

  bool operator==(const FieldInfo&) const = default;
};

struct ParamInfo {
  std::string name;
  std::string type;

  bool operator==(const ParamInfo&) const = default;
};

struct MethodInfo {
  std::string name;
  std::vector<ParamInfo> params;
  std::string return_type;  // empty for constructors
  bool is_constructor = false;
  bool has_body = false;
  int node = -1;  // MethodDeclaration / ConstructorDeclaration in the unit AST
  int first_token = 0;
  int last_token = 0;
  int start_line = 0;
  int end_line = 0;
  std::string signature;
};

struct TypeInfo {
  std::string name;
  bool is_interface = false;
  std::string superclass;  // erased, empty if none
  std::vector<std::string> interfaces;
  std::vector<FieldInfo> fields;
  std::vector<MethodInfo> methods;
  int node = -1;
};

struct ImportInfo {
  std::string name;  // dotted, without ".*"
  bool wildcard = false;
  bool is_static = false;
};

/// A parsed source file: tokens, full AST, and top-level declarations.
struct CompilationUnit {
  std::vector<Token> tokens;
  Ast ast;
  std::string package_name;
  std::vector<ImportInfo> imports;
  std::vector<TypeInfo> types;  // top-level types only; nested types are not cataloged
};

/// Parses the supported subset: package/imports, top-level classes and
/// interfaces, fields, methods, constructors, blocks, local declarations,
/// if/else, while, classic for, return, expression statements and the usual
/// expression forms. Generics are lexed and kept as leaves but erased from
/// type names. Lambdas, anonymous classes, casts, try/catch, switch,
/// break/continue, throw and enhanced for are rejected with
/// PositionedError(Parse).
CompilationUnit parse(std::string_view source);

/// Canonical "name(T1,T2)" signature.
std::string make_signature(std::string_view name, const std::vector<ParamInfo>& params);

struct ParsedSignature {
  std::string name;
  std::vector<std::string> param_types;
};
/// Inverse of make_signature. Throws InvalidArgument on malformed text.
ParsedSignature parse_signature(std::string_view signature);

/// One method or constructor together with everything the per-method
/// representations need.
struct MethodSource {
  EntityId method_id;
  std::string name;
  std::string signature;
  std::string file_relpath;
  int start_line = 0;
  int end_line = 0;
  /// File bytes from the start of start_line up to the end of end_line,
  /// excluding the final line terminator.
  std::string text;
  /// Tokens of the declaration itself (first annotation/modifier through the
  /// closing brace). Equal to lex(text) when no other declaration shares the
  /// method's first or last line.
  std::vector<Token> tokens;
  /// Method subtree; token indices refer to `tokens`.
  Ast ast;
  std::vector<ParamInfo> params;
  std::string return_type;
  bool is_constructor = false;
  bool has_body = false;
  std::string class_name;
  std::vector<FieldInfo> class_fields;
};

/// Slices [start_line, end_line] out of `source` per the MethodSource::text rule.
std::string slice_lines(std::string_view source, int start_line, int end_line);

/// One MethodSource per method/constructor of every top-level type, with
/// ids assigned from method_key(file_relpath, signature, start_line).
std::vector<MethodSource> extract_methods(const CompilationUnit& unit, std::string_view source,
                                          std::string_view file_relpath);

/// Erased text of a Type node: identifiers, dots, primitives and dims, with
/// type arguments dropped ("Map.Entry", "int[]").
std::string erased_type_text(const Ast& ast, const std::vector<Token>& tokens, int type_node);

/// Source text of the subtree's terminals joined by single spaces.
std::string subtree_text(const Ast& ast, const std::vector<Token>& tokens, int node);

}  // namespace srcwb
