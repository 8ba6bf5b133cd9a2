#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srcwb/parser.hpp"

namespace srcwb {

enum class Repr { TEXT, TKNA, TKNB, ASTS, C2VC, C2SQ, FTGR };
std::string_view to_string(Repr r);
std::optional<Repr> parse_repr(std::string_view name);
const std::vector<Repr>& all_reprs();

inline constexpr std::string_view kLitComma = "<LITCOMMA>";

/// Raw method text, comments and whitespace preserved.
std::string repr_text(const MethodSource& m);
/// Lexemes joined by single spaces. Literals keep their internal spaces.
std::string tokens_tkna(const MethodSource& m);
std::string tokens_tkna(const std::vector<Token>& tokens);
/// Lexemes joined by commas. Commas inside literals become <LITCOMMA>; the
/// separator token ',' is written as "\",\"".
std::string tokens_tknb(const MethodSource& m);
std::string tokens_tknb(const std::vector<Token>& tokens);
/// Splits a TKNB payload back into lexemes, restoring literal commas.
std::vector<std::string> split_tknb(std::string_view payload);

}  // namespace srcwb
