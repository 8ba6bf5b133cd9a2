#include "srcwb/representations.hpp"

namespace srcwb {

std::string_view to_string(Repr r) {
  switch (r) {
    case Repr::TEXT: return "TEXT";
    case Repr::TKNA: return "TKNA";
    case Repr::TKNB: return "TKNB";
    case Repr::ASTS: return "ASTS";
    case Repr::C2VC: return "C2VC";
    case Repr::C2SQ: return "C2SQ";
    case Repr::FTGR: return "FTGR";
  }
  return "TEXT";
}

const std::vector<Repr>& all_reprs() {
  static const std::vector<Repr> all = {Repr::TEXT, Repr::TKNA, Repr::TKNB, Repr::ASTS,
                                        Repr::C2VC, Repr::C2SQ, Repr::FTGR};
  return all;
}

std::optional<Repr> parse_repr(std::string_view name) {
  for (Repr r : all_reprs()) {
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

std::string repr_text(const MethodSource& m) { return m.text; }

std::string tokens_tkna(const std::vector<Token>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i].lexeme;
  }
  return out;
}

std::string tokens_tkna(const MethodSource& m) { return tokens_tkna(m.tokens); }

namespace {
constexpr std::string_view kQuotedComma = "\",\"";
}

std::string tokens_tknb(const std::vector<Token>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(',');
    const Token& t = tokens[i];
    if (t.kind == TokenKind::Separator && t.lexeme == ",") {
      out += kQuotedComma;
    } else if (t.is_literal()) {
      for (char c : t.lexeme) {
        if (c == ',') {
          out += kLitComma;
        } else {
          out.push_back(c);
        }
      }
    } else {
      out += t.lexeme;
    }
  }
  return out;
}

std::string tokens_tknb(const MethodSource& m) { return tokens_tknb(m.tokens); }

std::vector<std::string> split_tknb(std::string_view payload) {
  std::vector<std::string> items;
  if (payload.empty()) return items;
  std::size_t pos = 0;
  while (true) {
    // A literal comma never survives as ',' so "\",\"" is always the separator token.
    if (payload.substr(pos, kQuotedComma.size()) == kQuotedComma &&
        (pos + kQuotedComma.size() == payload.size() || payload[pos + kQuotedComma.size()] == ',')) {
      items.emplace_back(",");
      pos += kQuotedComma.size();
    } else {
      auto comma = payload.find(',', pos);
      std::string item(payload.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                           : comma - pos));
      std::string restored;
      for (std::size_t k = 0; k < item.size();) {
        if (item.compare(k, kLitComma.size(), kLitComma) == 0) {
          restored.push_back(',');
          k += kLitComma.size();
        } else {
          restored.push_back(item[k++]);
        }
      }
      items.push_back(std::move(restored));
      pos = comma == std::string_view::npos ? payload.size() : comma;
    }
    if (pos >= payload.size()) break;
    ++pos;  // skip the delimiter
  }
  return items;
}

}  // namespace srcwb
