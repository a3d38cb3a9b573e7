#include "itt/gateway/monitor_registry.hpp"

#include <fstream>
#include <mutex>
#include <stdexcept>

#include <json.hpp>

#include "itt/core/crypto.hpp"

namespace itt::gateway {
namespace {

std::string salted_digest(std::string_view salt, std::string_view secret) {
  std::string input{salt};
  input.append(secret);
  return crypto::to_hex(crypto::sha256(input));
}

}  // namespace

std::string hash_monitor_secret(std::string_view secret) {
  std::string salt = crypto::random_bytes(16);
  std::string salt_hex =
      crypto::to_hex({reinterpret_cast<const std::uint8_t*>(salt.data()), salt.size()});
  return "sha256$" + salt_hex + "$" + salted_digest(salt, secret);
}

bool verify_monitor_secret(std::string_view encoded, std::string_view secret) noexcept {
  constexpr std::string_view prefix = "sha256$";
  if (encoded.substr(0, prefix.size()) != prefix) return false;
  auto rest = encoded.substr(prefix.size());
  auto sep = rest.find('$');
  if (sep == std::string_view::npos) return false;
  auto salt = crypto::from_hex(rest.substr(0, sep));
  if (!salt) return false;
  std::string salt_bytes(salt->begin(), salt->end());
  return crypto::constant_time_equal(salted_digest(salt_bytes, secret), rest.substr(sep + 1));
}

MonitorRegistry::MonitorRegistry(const MonitorRegistry& other) {
  std::shared_lock lock{other.mutex_};
  hashes_ = other.hashes_;
}

MonitorRegistry& MonitorRegistry::operator=(const MonitorRegistry& other) {
  if (this == &other) return *this;
  std::map<std::string, std::string> copy;
  {
    std::shared_lock lock{other.mutex_};
    copy = other.hashes_;
  }
  std::unique_lock lock{mutex_};
  hashes_ = std::move(copy);
  return *this;
}

MonitorRegistry MonitorRegistry::load(const std::filesystem::path& file) {
  MonitorRegistry registry;
  if (!std::filesystem::exists(file)) return registry;
  std::ifstream in{file};
  auto doc = nlohmann::json::parse(in, nullptr, false);
  if (!doc.is_array()) throw std::invalid_argument(file.string() + ": expected a JSON array");
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("client_id") || !item["client_id"].is_string()) {
      throw std::invalid_argument(file.string() + ": every item needs a string client_id");
    }
    auto id = item["client_id"].get<std::string>();
    if (item.contains("secret_hash") && item["secret_hash"].is_string()) {
      if (id.empty() || registry.hashes_.count(id) != 0) {
        throw std::invalid_argument(file.string() + ": duplicate or empty client_id " + id);
      }
      registry.hashes_[id] = item["secret_hash"].get<std::string>();
    } else if (item.contains("secret") && item["secret"].is_string()) {
      registry.add(id, item["secret"].get<std::string>());
    } else {
      throw std::invalid_argument(file.string() + ": " + id + " has neither secret nor secret_hash");
    }
  }
  return registry;
}

void MonitorRegistry::save(const std::filesystem::path& file) const {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& c : credentials()) {
    doc.push_back({{"client_id", c.client_id}, {"secret_hash", c.secret_hash}});
  }
  std::ofstream out{file, std::ios::trunc};
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << doc.dump(2) << '\n';
  out.close();
  std::filesystem::permissions(file,
                               std::filesystem::perms::owner_read |
                                   std::filesystem::perms::owner_write,
                               std::filesystem::perm_options::replace);
}

void MonitorRegistry::add(const std::string& client_id, std::string_view secret) {
  if (client_id.empty() || client_id.find(':') != std::string::npos) {
    throw std::invalid_argument("client id must be nonempty and must not contain ':'");
  }
  if (secret.empty()) throw std::invalid_argument("monitor secret must not be empty");
  std::unique_lock lock{mutex_};
  if (!hashes_.emplace(client_id, hash_monitor_secret(secret)).second) {
    throw std::invalid_argument("monitor client id already exists: " + client_id);
  }
}

bool MonitorRegistry::authenticate(const std::string& client_id, std::string_view secret) const {
  std::shared_lock lock{mutex_};
  auto it = hashes_.find(client_id);
  return it != hashes_.end() && verify_monitor_secret(it->second, secret);
}

std::vector<MonitorCredential> MonitorRegistry::credentials() const {
  std::shared_lock lock{mutex_};
  std::vector<MonitorCredential> out;
  for (const auto& [id, hash] : hashes_) out.push_back({id, hash});
  return out;
}

std::size_t MonitorRegistry::size() const {
  std::shared_lock lock{mutex_};
  return hashes_.size();
}

}  // namespace itt::gateway
