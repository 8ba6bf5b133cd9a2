#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "srcwb/catalog.hpp"

namespace srcwb {

enum class ValueType { Integer, Text, Flag };
std::string_view to_string(ValueType type);
ValueType parse_value_type(std::string_view text);

using PropertyValue = std::variant<std::int64_t, std::string, bool>;

/// CSV rendering: decimal integers, raw text, flags as "1"/"0".
std::string render_value(const PropertyValue& v);
/// Inverse of render_value; flags also accept "true"/"false". Throws InvalidArgument.
PropertyValue parse_value(ValueType type, std::string_view text);

struct PropertyKeyInfo {
  std::string code;
  ValueType type = ValueType::Integer;
  std::string description;
  bool builtin = false;
  /// False for keys that are only ever imported (no computer shipped).
  bool computed = false;
};

/// Built-in keys in canonical order.
const std::vector<PropertyKeyInfo>& builtin_keys();
/// 4 to 16 uppercase ASCII letters.
bool valid_key_code(std::string_view code);

using PropertyRows = std::vector<std::pair<EntityId, PropertyValue>>;

struct AddResult {
  std::size_t stored = 0;
  std::vector<EntityId> rejected;  // ids absent from the method table
};

/// Per-key method→value tables bound to a catalog. The catalog must outlive
/// the store.
class PropertyStore {
 public:
  explicit PropertyStore(const Catalog& catalog);

  /// Throws InvalidArgument for a malformed code and Duplicate when the code
  /// exists with a different type.
  const PropertyKeyInfo& register_key(const std::string& code, ValueType type,
                                      const std::string& description = {});
  const PropertyKeyInfo* key(const std::string& code) const;
  std::vector<PropertyKeyInfo> keys() const;

  /// Replaces the table for `code`. Unknown codes are auto-registered with the
  /// type of the first value. Rows with unknown method ids are rejected and
  /// returned; values of the wrong type throw InvalidArgument before anything
  /// is stored.
  AddResult add_property(const std::string& code, const PropertyRows& rows);

  /// Values for `ids` in order; nullopt where a method has no value. Throws
  /// NotFound when the key has no table.
  std::vector<std::optional<PropertyValue>> get_property(const std::string& code,
                                                         const std::vector<EntityId>& ids) const;

  bool has_table(const std::string& code) const { return tables_.count(code) != 0; }
  const std::map<EntityId, PropertyValue>& table(const std::string& code) const;
  std::vector<std::string> table_codes() const;

  /// Writes "<KEY>.csv" (method_id,value) rows sorted by method id.
  void write_table(const std::string& code, const std::filesystem::path& dir) const;
  /// Reads "<dir>/<KEY>.csv" into the store; returns the add result.
  AddResult read_table(const std::string& code, const std::filesystem::path& dir);
  /// Reads an arbitrary property CSV (method_id,value) under `code`.
  AddResult import_csv(const std::string& code, ValueType type, const std::filesystem::path& file);

 private:
  const Catalog& catalog_;
  std::map<std::string, PropertyKeyInfo> keys_;
  std::map<std::string, std::map<EntityId, PropertyValue>> tables_;
};

extern const std::vector<std::string> kPropertyHeader;

}  // namespace srcwb
