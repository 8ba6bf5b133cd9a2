#include "srcwb/entity_id.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>

#include "srcwb/error.hpp"

namespace srcwb {

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::Project: return "project";
    case EntityKind::Package: return "package";
    case EntityKind::Class: return "class";
    case EntityKind::Method: return "method";
  }
  return "unknown";
}

EntityId EntityId::from_hex(std::string_view hex) {
  if (hex.size() != 32) {
    throw Error(ErrorKind::InvalidArgument,
                "entity id must be 32 hex characters: '" + std::string(hex) + "'");
  }
  for (char c : hex) {
    bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    if (!ok) {
      throw Error(ErrorKind::InvalidArgument,
                  "entity id has a non-hex character: '" + std::string(hex) + "'");
    }
  }
  return EntityId(std::string(hex));
}

EntityId assign_id(EntityKind kind, std::string_view canonical_key) {
  if (canonical_key.empty()) {
    throw Error(ErrorKind::InvalidArgument, "canonical key must not be empty");
  }
  std::string material(to_string(kind));
  material.push_back('\0');
  material.append(canonical_key);

  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), material.data(), material.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1 || len < 16) {
    throw Error(ErrorKind::Internal, "sha256 digest failed");
  }

  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(32);
  for (int i = 0; i < 16; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0x0f]);
  }
  return EntityId::from_hex(hex);
}

std::string project_key(std::string_view name, std::string_view relpath) {
  return "project:" + std::string(name) + "@" + std::string(relpath);
}

std::string package_key(std::string_view project_relpath, std::string_view package_relpath) {
  return "package:" + std::string(project_relpath) + "/" + std::string(package_relpath);
}

std::string class_key(std::string_view file_relpath) {
  return "class:" + std::string(file_relpath);
}

std::string method_key(std::string_view file_relpath, std::string_view signature,
                       int start_line) {
  return "method:" + std::string(file_relpath) + "#" + std::string(signature) + "@" +
         std::to_string(start_line);
}

}  // namespace srcwb
