#pragma once

#include <filesystem>
#include <map>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace itt::gateway {

struct MonitorCredential {
  std::string client_id;
  std::string secret_hash;  // sha256$<salt hex>$<digest hex>
};

std::string hash_monitor_secret(std::string_view secret);
bool verify_monitor_secret(std::string_view encoded, std::string_view secret) noexcept;

// Basic-auth credentials of monitors and peer services. The file is a JSON
// array of {"client_id", "secret_hash"} objects; a plaintext "secret" is
// accepted on load and hashed in memory.
class MonitorRegistry {
 public:
  MonitorRegistry() = default;
  MonitorRegistry(const MonitorRegistry& other);
  MonitorRegistry& operator=(const MonitorRegistry& other);

  static MonitorRegistry load(const std::filesystem::path& file);
  void save(const std::filesystem::path& file) const;

  /// Throws std::invalid_argument when the client id exists or is malformed.
  void add(const std::string& client_id, std::string_view secret);
  bool authenticate(const std::string& client_id, std::string_view secret) const;
  std::vector<MonitorCredential> credentials() const;
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::string> hashes_;
};

}  // namespace itt::gateway
