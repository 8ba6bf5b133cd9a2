#include "srcwb/pathcontexts.hpp"

#include <algorithm>
#include <cctype>

#include "srcwb/error.hpp"
#include "srcwb/rng.hpp"

namespace srcwb {

namespace {

// Index of `child` among the children of its parent.
int child_index(const Ast& ast, int child) {
  auto kids = ast.children(ast.parent(child));
  return static_cast<int>(std::find(kids.begin(), kids.end(), child) - kids.begin());
}

RawPath make_path(const Ast& ast, int a, int b) {
  std::vector<int> up_a{a}, up_b{b};
  for (int p = ast.parent(a); p >= 0; p = ast.parent(p)) up_a.push_back(p);
  for (int p = ast.parent(b); p >= 0; p = ast.parent(p)) up_b.push_back(p);
  // Strip the common suffix (shared ancestors above the LCA).
  std::size_t i = up_a.size(), j = up_b.size();
  while (i > 0 && j > 0 && up_a[i - 1] == up_b[j - 1]) {
    --i;
    --j;
  }
  RawPath p;
  p.start = a;
  p.end = b;
  p.lca = up_a[i];
  p.lca_type = ast.node(p.lca).type;
  for (std::size_t k = 0; k < i; ++k) p.up.push_back(ast.node(up_a[k]).type);
  for (std::size_t k = j; k-- > 0;) p.down.push_back(ast.node(up_b[k]).type);
  p.width = std::abs(child_index(ast, up_b[j - 1]) - child_index(ast, up_a[i - 1]));
  return p;
}

}  // namespace

std::vector<RawPath> extract_paths(const Ast& ast, const PathConfig& cfg) {
  if (cfg.limits && (cfg.max_length < 1 || cfg.max_width < 1 || cfg.max_contexts < 1)) {
    throw Error(ErrorKind::InvalidArgument, "path limits must be at least 1");
  }
  std::vector<RawPath> out;
  if (ast.empty()) return out;
  const std::vector<int> terms = ast.terminals();
  for (std::size_t x = 0; x < terms.size(); ++x) {
    for (std::size_t y = x + 1; y < terms.size(); ++y) {
      RawPath p = make_path(ast, terms[x], terms[y]);
      if (cfg.limits && (static_cast<int>(p.length()) > cfg.max_length || p.width > cfg.max_width)) {
        continue;
      }
      out.push_back(std::move(p));
    }
  }
  if (cfg.limits && out.size() > cfg.max_contexts) {
    Rng rng(cfg.seed);
    std::vector<RawPath> sampled;
    for (std::size_t idx : rng.sample_indices(out.size(), cfg.max_contexts)) {
      sampled.push_back(std::move(out[idx]));
    }
    out = std::move(sampled);
  }
  return out;
}

std::string path_string(const RawPath& p) {
  std::string s;
  for (const auto& t : p.up) {
    s += t;
    s += '^';
  }
  s += p.lca_type;
  for (const auto& t : p.down) {
    s += '_';
    s += t;
  }
  return s;
}

std::int32_t java_string_hash(std::string_view text) {
  // Java hashes UTF-16 code units; path strings are ASCII so bytes coincide.
  std::uint32_t h = 0;
  for (unsigned char c : text) h = 31 * h + c;
  return static_cast<std::int32_t>(h);
}

std::vector<std::string> subtokens(std::string_view id) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  auto lower = [](char c) { return std::islower(static_cast<unsigned char>(c)) != 0; };
  auto upper = [](char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; };
  for (std::size_t i = 0; i < id.size(); ++i) {
    const char c = id[i];
    if (!std::isalnum(static_cast<unsigned char>(c))) {
      flush();
      continue;
    }
    if (upper(c) && i > 0) {
      const char prev = id[i - 1];
      const bool next_lower = i + 1 < id.size() && lower(id[i + 1]);
      if (lower(prev) || std::isdigit(static_cast<unsigned char>(prev)) ||
          (upper(prev) && next_lower)) {
        flush();
      }
    }
    cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  flush();
  return out;
}

std::string escape_terminal(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '%') {
      out += "%25";
    } else if (c == ',') {
      out += "%2C";
    } else if (c == ' ') {
      out += "%20";
    } else if (c == '\t') {
      out += "%09";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

namespace {

const std::string& terminal_text(const MethodSource& m, int node) {
  return m.tokens[static_cast<std::size_t>(m.ast.node(node).token)].lexeme;
}

std::string joined_subtokens(std::string_view text) {
  auto subs = subtokens(text);
  if (subs.empty()) return escape_terminal(text);
  std::string s;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (i) s.push_back('|');
    s += subs[i];
  }
  return s;
}

}  // namespace

std::string to_c2vc(const MethodSource& m, const std::vector<RawPath>& paths,
                    const PathConfig& cfg) {
  auto term = [&](int n) {
    std::string t = escape_terminal(terminal_text(m, n));
    if (cfg.normalize_terminals) {
      std::transform(t.begin(), t.end(), t.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    }
    return t;
  };
  std::string rec = escape_terminal(m.name);
  for (const RawPath& p : paths) {
    rec += ' ';
    rec += term(p.start);
    rec += ',';
    rec += std::to_string(java_string_hash(path_string(p)));
    rec += ',';
    rec += term(p.end);
  }
  return rec;
}

std::string to_c2sq(const MethodSource& m, const std::vector<RawPath>& paths) {
  std::string rec = joined_subtokens(m.name);
  for (const RawPath& p : paths) {
    rec += ' ';
    rec += joined_subtokens(terminal_text(m, p.start));
    rec += ',';
    rec += path_string(p);
    rec += ',';
    rec += joined_subtokens(terminal_text(m, p.end));
  }
  return rec;
}

}  // namespace srcwb
