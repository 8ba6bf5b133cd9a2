#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace srcwb::csv {

using Row = std::vector<std::string>;

/// Quotes a field when it contains a comma, quote, CR or LF (RFC 4180).
std::string escape_field(std::string_view field);
std::string format_row(const Row& row);

struct Table {
  Row header;
  std::vector<Row> rows;
  /// 1-based physical line on which each row starts, parallel to `rows`.
  std::vector<int> row_lines;
};

/// Parses CSV text. Throws PositionedError(Parse) on unterminated quotes or
/// rows whose field count differs from the header.
Table parse(std::string_view text);

Table read_file(const std::filesystem::path& path);

/// Reads a file and checks that its header matches `expected` exactly.
Table read_file(const std::filesystem::path& path, const Row& expected_header);

/// Writes header + rows with LF line endings. Creates parent directories.
void write_file(const std::filesystem::path& path, const Row& header,
                const std::vector<Row>& rows);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace srcwb::csv
