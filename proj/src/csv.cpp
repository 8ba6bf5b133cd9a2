#include "srcwb/csv.hpp"

#include <fstream>
#include <sstream>

#include "srcwb/error.hpp"

namespace srcwb::csv {

std::string escape_field(std::string_view field) {
  bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_row(const Row& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(',');
    out += escape_field(row[i]);
  }
  return out;
}

Table parse(std::string_view text) {
  Table table;
  std::vector<Row> records;
  std::vector<int> lines;

  Row row;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool row_has_content = false;
  int line = 1;
  int row_line = 1;
  std::size_t i = 0;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_row = [&] {
    end_field();
    records.push_back(std::move(row));
    lines.push_back(row_line);
    row.clear();
    row_has_content = false;
  };

  while (i < text.size()) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        continue;
      }
      if (c == '\n') ++line;
      field.push_back(c);
      ++i;
      continue;
    }
    if (!row_has_content) {
      row_line = line;
      row_has_content = true;
    }
    if (c == '"') {
      if (!field.empty() || field_was_quoted) {
        throw PositionedError(ErrorKind::Parse, line, 1, "unexpected quote inside field");
      }
      in_quotes = true;
      field_was_quoted = true;
      ++i;
    } else if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      end_row();
      ++line;
      i += 2;
    } else if (c == '\n') {
      end_row();
      ++line;
      ++i;
    } else {
      if (field_was_quoted) {
        throw PositionedError(ErrorKind::Parse, line, 1, "characters after closing quote");
      }
      field.push_back(c);
      ++i;
    }
  }
  if (in_quotes) {
    throw PositionedError(ErrorKind::Parse, row_line, 1, "unterminated quoted field");
  }
  if (row_has_content) end_row();

  if (records.empty()) {
    throw PositionedError(ErrorKind::Parse, 1, 1, "missing header row");
  }
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw PositionedError(ErrorKind::Parse, lines[r], 1,
                            "expected " + std::to_string(table.header.size()) +
                                " fields, found " + std::to_string(records[r].size()));
    }
    table.rows.push_back(std::move(records[r]));
    table.row_lines.push_back(lines[r]);
  }
  return table;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

Table read_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorKind::MissingArtifact, "missing file " + path.string());
  }
  try {
    return parse(read_text(path));
  } catch (const PositionedError& e) {
    throw PositionedError(ErrorKind::Parse, e.line(), e.col(),
                          path.string() + ": " + e.detail());
  }
}

Table read_file(const std::filesystem::path& path, const Row& expected_header) {
  Table t = read_file(path);
  if (t.header != expected_header) {
    throw PositionedError(ErrorKind::Parse, 1, 1,
                          path.string() + ": unexpected header '" + format_row(t.header) +
                              "', expected '" + format_row(expected_header) + "'");
  }
  return t;
}

void write_file(const std::filesystem::path& path, const Row& header,
                const std::vector<Row>& rows) {
  std::string text = format_row(header);
  text.push_back('\n');
  for (const Row& r : rows) {
    text += format_row(r);
    text.push_back('\n');
  }
  write_text(path, text);
}

}  // namespace srcwb::csv
