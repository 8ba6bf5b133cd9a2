#include "srcwb/properties.hpp"

#include <charconv>

#include "srcwb/csv.hpp"
#include "srcwb/error.hpp"

namespace srcwb {

const std::vector<std::string> kPropertyHeader = {"method_id", "value"};

std::string_view to_string(ValueType type) {
  switch (type) {
    case ValueType::Integer: return "integer";
    case ValueType::Text: return "text";
    case ValueType::Flag: return "flag";
  }
  return "text";
}

ValueType parse_value_type(std::string_view text) {
  if (text == "integer") return ValueType::Integer;
  if (text == "text") return ValueType::Text;
  if (text == "flag") return ValueType::Flag;
  throw Error(ErrorKind::InvalidArgument,
              "unknown value type '" + std::string(text) + "' (expected integer, text or flag)");
}

std::string render_value(const PropertyValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "1" : "0";
  return std::get<std::string>(v);
}

PropertyValue parse_value(ValueType type, std::string_view text) {
  switch (type) {
    case ValueType::Integer: {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::InvalidArgument, "not an integer: '" + std::string(text) + "'");
      }
      return v;
    }
    case ValueType::Flag:
      if (text == "1" || text == "true") return true;
      if (text == "0" || text == "false") return false;
      throw Error(ErrorKind::InvalidArgument, "not a flag: '" + std::string(text) + "'");
    case ValueType::Text: return std::string(text);
  }
  return std::string(text);
}

namespace {
ValueType type_of(const PropertyValue& v) {
  if (std::holds_alternative<std::int64_t>(v)) return ValueType::Integer;
  if (std::holds_alternative<bool>(v)) return ValueType::Flag;
  return ValueType::Text;
}
}  // namespace

const std::vector<PropertyKeyInfo>& builtin_keys() {
  using V = ValueType;
  static const std::vector<PropertyKeyInfo> keys = {
      {"TLOC", V::Integer, "total lines of code", true, true},
      {"SLOC", V::Integer, "source lines of code", true, true},
      {"CMPX", V::Integer, "cyclomatic complexity", true, true},
      {"MXIN", V::Integer, "maximum nesting depth", true, true},
      {"NPTH", V::Integer, "npath complexity", true, true},
      {"NMTK", V::Integer, "number of tokens", true, true},
      {"NMPR", V::Integer, "number of parameters", true, true},
      {"NUID", V::Integer, "number of unique identifiers", true, true},
      {"NMOP", V::Integer, "number of operators", true, true},
      {"NMLT", V::Integer, "number of literals", true, true},
      {"NMRT", V::Integer, "number of return statements", true, true},
      {"NAME", V::Text, "method name", true, true},
      {"NUPC", V::Integer, "number of unique parent callers", true, true},
      {"NUCC", V::Integer, "number of unique callee methods", true, true},
      {"NMNC", V::Integer, "number of non-local call sites", true, true},
      {"NMLC", V::Integer, "number of local call sites", true, true},
      {"NLDF", V::Flag, "presence of null dereference", true, false},
      {"RSLK", V::Flag, "presence of resource leak", true, false},
      {"NTID", V::Text, "listed in artifact tables, undefined", true, false},
  };
  return keys;
}

bool valid_key_code(std::string_view code) {
  if (code.size() < 4 || code.size() > 16) return false;
  for (char c : code) {
    if (c < 'A' || c > 'Z') return false;
  }
  return true;
}

PropertyStore::PropertyStore(const Catalog& catalog) : catalog_(catalog) {
  for (const auto& k : builtin_keys()) keys_[k.code] = k;
}

const PropertyKeyInfo& PropertyStore::register_key(const std::string& code, ValueType type,
                                                   const std::string& description) {
  if (!valid_key_code(code)) {
    throw Error(ErrorKind::InvalidArgument,
                "property code '" + code + "' must be 4-16 uppercase letters");
  }
  auto it = keys_.find(code);
  if (it != keys_.end()) {
    if (it->second.type != type) {
      throw Error(ErrorKind::Duplicate, "property " + code + " is already registered as " +
                                            std::string(to_string(it->second.type)));
    }
    return it->second;
  }
  PropertyKeyInfo info{code, type, description, false, false};
  return keys_[code] = std::move(info);
}

const PropertyKeyInfo* PropertyStore::key(const std::string& code) const {
  auto it = keys_.find(code);
  return it == keys_.end() ? nullptr : &it->second;
}

std::vector<PropertyKeyInfo> PropertyStore::keys() const {
  std::vector<PropertyKeyInfo> out = builtin_keys();
  for (const auto& [code, info] : keys_) {
    if (!info.builtin) out.push_back(info);
  }
  return out;
}

AddResult PropertyStore::add_property(const std::string& code, const PropertyRows& rows) {
  const PropertyKeyInfo* info = key(code);
  if (!info) {
    register_key(code, rows.empty() ? ValueType::Text : type_of(rows.front().second));
    info = key(code);
  }
  for (const auto& [id, v] : rows) {
    if (type_of(v) != info->type) {
      throw Error(ErrorKind::InvalidArgument, "value for " + id.hex() + " is not of type " +
                                                  std::string(to_string(info->type)) + " (" +
                                                  code + ")");
    }
  }
  AddResult result;
  std::map<EntityId, PropertyValue> table;
  for (const auto& [id, v] : rows) {
    if (!catalog_.find_method(id)) {
      result.rejected.push_back(id);
      continue;
    }
    table[id] = v;
  }
  result.stored = table.size();
  tables_[code] = std::move(table);
  return result;
}

std::vector<std::optional<PropertyValue>> PropertyStore::get_property(
    const std::string& code, const std::vector<EntityId>& ids) const {
  const auto& t = table(code);
  std::vector<std::optional<PropertyValue>> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    auto it = t.find(id);
    out.push_back(it == t.end() ? std::nullopt : std::optional<PropertyValue>(it->second));
  }
  return out;
}

const std::map<EntityId, PropertyValue>& PropertyStore::table(const std::string& code) const {
  auto it = tables_.find(code);
  if (it == tables_.end()) throw Error(ErrorKind::NotFound, "no values stored for property " + code);
  return it->second;
}

std::vector<std::string> PropertyStore::table_codes() const {
  std::vector<std::string> out;
  for (const auto& [code, t] : tables_) out.push_back(code);
  return out;
}

void PropertyStore::write_table(const std::string& code, const std::filesystem::path& dir) const {
  std::vector<csv::Row> rows;
  for (const auto& [id, v] : table(code)) rows.push_back({id.hex(), render_value(v)});
  csv::write_file(dir / (code + ".csv"), kPropertyHeader, rows);
}

AddResult PropertyStore::read_table(const std::string& code, const std::filesystem::path& dir) {
  const PropertyKeyInfo* info = key(code);
  if (!info) throw Error(ErrorKind::NotFound, "unknown property " + code);
  return import_csv(code, info->type, dir / (code + ".csv"));
}

AddResult PropertyStore::import_csv(const std::string& code, ValueType type,
                                    const std::filesystem::path& file) {
  register_key(code, type);
  const csv::Table t = csv::read_file(file, kPropertyHeader);
  PropertyRows rows;
  rows.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    try {
      rows.emplace_back(EntityId::from_hex(t.rows[r][0]), parse_value(type, t.rows[r][1]));
    } catch (const Error& e) {
      throw PositionedError(ErrorKind::Parse, t.row_lines[r], 1, e.what());
    }
  }
  return add_property(code, rows);
}

}  // namespace srcwb
