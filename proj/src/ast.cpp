#include "srcwb/ast.hpp"

#include "srcwb/error.hpp"

namespace srcwb {

Ast::Ast(std::vector<AstNode> nodes) : nodes_(std::move(nodes)) {
  const auto n = nodes_.size();
  children_.assign(n, {});
  end_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    int p = nodes_[i].parent;
    if (i == 0) {
      if (p != -1) throw Error(ErrorKind::InvalidArgument, "ast root must have no parent");
      continue;
    }
    if (p < 0 || static_cast<std::size_t>(p) >= i) {
      throw Error(ErrorKind::InvalidArgument,
                  "ast node " + std::to_string(i) + " is not in preorder");
    }
    children_[static_cast<std::size_t>(p)].push_back(static_cast<int>(i));
  }
  for (std::size_t i = n; i-- > 0;) {
    int e = static_cast<int>(i) + 1;
    if (!children_[i].empty()) e = end_[static_cast<std::size_t>(children_[i].back())];
    end_[i] = e;
  }
  // Preorder check: each child starts right after its previous sibling's subtree.
  for (std::size_t i = 0; i < n; ++i) {
    int expect = static_cast<int>(i) + 1;
    for (int c : children_[i]) {
      if (c != expect) {
        throw Error(ErrorKind::InvalidArgument, "ast is not stored in preorder");
      }
      expect = end_[static_cast<std::size_t>(c)];
    }
  }
}

std::vector<int> Ast::terminals() const {
  if (nodes_.empty()) return {};
  return terminals(0);
}

std::vector<int> Ast::terminals(int subtree_root) const {
  std::vector<int> out;
  for (int i = subtree_root; i < subtree_end(subtree_root); ++i) {
    if (is_terminal(i)) out.push_back(i);
  }
  return out;
}

Ast Ast::subtree(int i, int token_offset) const {
  std::vector<AstNode> out;
  const int end = subtree_end(i);
  out.reserve(static_cast<std::size_t>(end - i));
  for (int k = i; k < end; ++k) {
    AstNode n = node(k);
    n.parent = (k == i) ? -1 : n.parent - i;
    if (n.token >= 0) n.token -= token_offset;
    out.push_back(std::move(n));
  }
  return Ast(std::move(out));
}

int Ast::depth(int i) const {
  int d = 0;
  while (node(i).parent >= 0) {
    i = node(i).parent;
    ++d;
  }
  return d;
}

}  // namespace srcwb
