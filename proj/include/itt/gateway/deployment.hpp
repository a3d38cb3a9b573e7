#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "itt/gateway/api.hpp"
#include "itt/gateway/config.hpp"
#include "itt/gateway/http_server.hpp"
#include "itt/identity/password.hpp"
#include "itt/identity/secret_provider.hpp"
#include "itt/storage/database.hpp"

namespace itt::gateway {

std::string_view build_version() noexcept;

struct DeploymentOptions {
  const Clock* clock = nullptr;  // defaults to the system clock
  identity::KdfParams kdf = identity::KdfParams::production();
  std::unique_ptr<identity::SecretProvider> secrets;  // defaults to file + env
};

// Everything one process runs: storage, the three domain stores, the API,
// and the listening servers selected by the configured mode.
class Deployment {
 public:
  explicit Deployment(GatewayConfig config, DeploymentOptions options = {});
  ~Deployment();

  /// Binds the servers for the configured mode. Returns false and leaves
  /// nothing bound when a port is taken.
  bool bind();
  /// Serves on background threads.
  void start();
  /// Blocks until stop().
  void wait();
  void stop();

  int log_port() const { return log_port_; }
  int sso_port() const { return sso_port_; }

  const Api& api() const { return *api_; }
  logstore::LogStore& logs() { return *logs_; }
  policy::PolicyStore& policies() { return *policies_; }
  identity::IdentityService& identity() { return *identity_; }
  const GatewayConfig& config() const { return config_; }
  const Clock& clock() const { return *clock_; }

 private:
  GatewayConfig config_;
  SystemClock system_clock_;
  const Clock* clock_;
  std::unique_ptr<identity::SecretProvider> secrets_;
  std::shared_ptr<storage::Database> db_;
  std::unique_ptr<logstore::LogStore> logs_;
  std::unique_ptr<policy::PolicyStore> policies_;
  std::unique_ptr<identity::IdentityService> identity_;
  MonitorRegistry monitors_;
  std::unique_ptr<Api> api_;
  std::vector<std::unique_ptr<HttpServer>> servers_;
  std::vector<std::thread> threads_;
  int log_port_ = -1;
  int sso_port_ = -1;
};

}  // namespace itt::gateway
