#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace itt::identity {

// Named secrets (signing keys and the like).
class SecretProvider {
 public:
  virtual ~SecretProvider() = default;
  virtual std::optional<std::string> get(const std::string& name) const = 0;
  virtual void put(const std::string& name, const std::string& value) = 0;
};

class MemorySecretProvider final : public SecretProvider {
 public:
  std::optional<std::string> get(const std::string& name) const override;
  void put(const std::string& name, const std::string& value) override;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::string> secrets_;
};

// Environment first (ITT_SECRET_<NAME>, upper-cased), then one file per
// secret. Files are written with owner-only permissions.
class FileEnvSecretProvider final : public SecretProvider {
 public:
  explicit FileEnvSecretProvider(std::map<std::string, std::filesystem::path> files);

  std::optional<std::string> get(const std::string& name) const override;
  void put(const std::string& name, const std::string& value) override;

 private:
  std::map<std::string, std::filesystem::path> files_;
};

inline constexpr const char* kSigningKeyName = "signing_key";

/// Returns the raw signing key, generating and storing 32 random bytes
/// (hex-encoded) on first use.
std::string load_or_create_signing_key(SecretProvider& secrets);

}  // namespace itt::identity
