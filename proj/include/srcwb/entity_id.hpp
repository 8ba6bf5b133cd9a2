#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace srcwb {

enum class EntityKind { Project, Package, Class, Method };

std::string_view to_string(EntityKind kind);

/// 128-bit entity identifier, stored as 32 lowercase hex characters.
class EntityId {
 public:
  EntityId() = default;

  /// Validates `hex` (32 chars, [0-9a-f]); throws InvalidArgument otherwise.
  static EntityId from_hex(std::string_view hex);

  const std::string& hex() const noexcept { return hex_; }
  bool empty() const noexcept { return hex_.empty(); }

  auto operator<=>(const EntityId&) const = default;

 private:
  explicit EntityId(std::string hex) : hex_(std::move(hex)) {}
  std::string hex_;
};

/// First 128 bits of SHA-256(kind || 0x00 || canonical_key).
EntityId assign_id(EntityKind kind, std::string_view canonical_key);

// Canonical keys for each entity granularity.
std::string project_key(std::string_view name, std::string_view relpath);
std::string package_key(std::string_view project_relpath, std::string_view package_relpath);
std::string class_key(std::string_view file_relpath);
std::string method_key(std::string_view file_relpath, std::string_view signature, int start_line);

}  // namespace srcwb

template <>
struct std::hash<srcwb::EntityId> {
  std::size_t operator()(const srcwb::EntityId& id) const noexcept {
    return std::hash<std::string>{}(id.hex());
  }
};
