#include "itt/identity/secret_provider.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "itt/core/crypto.hpp"
#include "itt/core/validation.hpp"

namespace itt::identity {

std::optional<std::string> MemorySecretProvider::get(const std::string& name) const {
  std::lock_guard lock{mutex_};
  auto it = secrets_.find(name);
  if (it == secrets_.end()) return std::nullopt;
  return it->second;
}

void MemorySecretProvider::put(const std::string& name, const std::string& value) {
  std::lock_guard lock{mutex_};
  secrets_[name] = value;
}

FileEnvSecretProvider::FileEnvSecretProvider(std::map<std::string, std::filesystem::path> files)
    : files_(std::move(files)) {}

std::optional<std::string> FileEnvSecretProvider::get(const std::string& name) const {
  std::string env_name = "ITT_SECRET_";
  for (char c : name) env_name.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (const char* value = std::getenv(env_name.c_str()); value != nullptr && *value != '\0') {
    return std::string{value};
  }
  auto it = files_.find(name);
  if (it == files_.end() || !std::filesystem::exists(it->second)) return std::nullopt;
  std::ifstream in{it->second, std::ios::binary};
  std::ostringstream buf;
  buf << in.rdbuf();
  return trim(buf.str());
}

void FileEnvSecretProvider::put(const std::string& name, const std::string& value) {
  auto it = files_.find(name);
  if (it == files_.end()) throw std::runtime_error("no file configured for secret " + name);
  namespace fs = std::filesystem;
  if (it->second.has_parent_path()) fs::create_directories(it->second.parent_path());
  {
    std::ofstream out{it->second, std::ios::binary | std::ios::trunc};
    if (!out) throw std::runtime_error("cannot write secret file " + it->second.string());
    out << value << '\n';
  }
  fs::permissions(it->second, fs::perms::owner_read | fs::perms::owner_write,
                  fs::perm_options::replace);
}

std::string load_or_create_signing_key(SecretProvider& secrets) {
  if (auto stored = secrets.get(kSigningKeyName)) {
    if (auto bytes = crypto::from_hex(*stored); bytes && bytes->size() >= 32) {
      return std::string(bytes->begin(), bytes->end());
    }
    throw std::runtime_error("signing key must be at least 32 bytes, hex-encoded");
  }
  std::string key = crypto::random_bytes(32);
  secrets.put(kSigningKeyName,
              crypto::to_hex({reinterpret_cast<const std::uint8_t*>(key.data()), key.size()}));
  return key;
}

}  // namespace itt::identity
