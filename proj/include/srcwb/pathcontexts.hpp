#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srcwb/parser.hpp"

namespace srcwb {

struct PathConfig {
  int max_length = 8;  // nodes on the path, terminals included
  int max_width = 2;   // child-index distance at the lowest common ancestor
  std::size_t max_contexts = 200;
  std::uint64_t seed = 0;
  /// When false every terminal pair is returned and nothing is sampled.
  bool limits = true;
  /// Lowercase C2VC terminals.
  bool normalize_terminals = false;
};

struct RawPath {
  int start = -1;  // terminal node indices, start before end in token order
  int end = -1;
  int lca = -1;
  std::vector<std::string> up;    // node types from start up to, not including, the LCA
  std::string lca_type;
  std::vector<std::string> down;  // node types below the LCA down to end

  std::size_t length() const { return up.size() + 1 + down.size(); }
  int width = 0;
  bool operator==(const RawPath&) const = default;
};

/// All terminal pairs whose path satisfies the limits, in (start, end) order;
/// uniformly sampled down to max_contexts with the seed when there are more.
std::vector<RawPath> extract_paths(const Ast& ast, const PathConfig& cfg);

/// "A^B^LCA_C_D": up-path types and the LCA joined by '^', then the down-path by '_'.
std::string path_string(const RawPath& p);

/// Java String.hashCode of the text, as a signed 32-bit value.
std::int32_t java_string_hash(std::string_view text);

/// Lowercase subtokens split on '_', non-alphanumerics and camelCase boundaries.
std::vector<std::string> subtokens(std::string_view identifier);

/// Escapes '%', ',' and ' ' so a terminal fits the space/comma record syntax.
std::string escape_terminal(std::string_view text);

/// "name left,hash,right ..." per code2vec.
std::string to_c2vc(const MethodSource& m, const std::vector<RawPath>& paths,
                    const PathConfig& cfg = {});
/// "sub|tok left|subs,Path^Types_Here,right|subs ..." per code2seq.
std::string to_c2sq(const MethodSource& m, const std::vector<RawPath>& paths);

}  // namespace srcwb
