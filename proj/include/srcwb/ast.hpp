#pragma once

#include <span>
#include <string>
#include <vector>

namespace srcwb {

struct AstNode {
  std::string type;  // grammar nonterminal, or terminal class for leaves
  int token = -1;    // index into the owning token list; -1 for nonterminals
  int line = 0;
  int col = 0;
  int parent = -1;

  bool operator==(const AstNode&) const = default;
};

/// Tree stored in preorder: every subtree occupies a contiguous index range
/// and children appear in source order. Node 0 is the root.
class Ast {
 public:
  Ast() = default;
  explicit Ast(std::vector<AstNode> nodes);

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const AstNode& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const std::vector<AstNode>& nodes() const { return nodes_; }
  std::span<const int> children(int i) const { return children_[static_cast<std::size_t>(i)]; }
  int parent(int i) const { return node(i).parent; }
  bool is_terminal(int i) const { return node(i).token >= 0; }

  /// One past the last preorder index inside the subtree rooted at `i`.
  int subtree_end(int i) const { return end_[static_cast<std::size_t>(i)]; }

  /// Terminal node indices in source order.
  std::vector<int> terminals() const;
  std::vector<int> terminals(int subtree_root) const;

  /// Copies the subtree rooted at `i` into a standalone tree. Token indices are
  /// shifted by -token_offset.
  Ast subtree(int i, int token_offset) const;

  int depth(int i) const;

  bool operator==(const Ast& other) const { return nodes_ == other.nodes_; }

 private:
  std::vector<AstNode> nodes_;
  std::vector<std::vector<int>> children_;
  std::vector<int> end_;
};

}  // namespace srcwb
