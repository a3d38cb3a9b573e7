#include "itt/gateway/deployment.hpp"

#include <iostream>

#include "itt/logstore/log_backend.hpp"

#ifndef ITT_VERSION
#define ITT_VERSION "0.0.0-dev"
#endif

namespace itt::gateway {

std::string_view build_version() noexcept { return ITT_VERSION; }

Deployment::Deployment(GatewayConfig config, DeploymentOptions options)
    : config_(std::move(config)),
      clock_(options.clock != nullptr ? options.clock : &system_clock_),
      secrets_(std::move(options.secrets)) {
  if (!secrets_) {
    secrets_ = std::make_unique<identity::FileEnvSecretProvider>(
        std::map<std::string, std::filesystem::path>{
            {identity::kSigningKeyName, config_.signing_key_file}});
  }
  db_ = storage::Database::open(config_.db_path);
  logs_ = std::make_unique<logstore::LogStore>(
      std::make_unique<logstore::SqliteLogBackend>(db_), *clock_);
  policies_ = std::make_unique<policy::PolicyStore>(db_, *clock_);
  identity_ = std::make_unique<identity::IdentityService>(
      db_, *clock_, identity::load_or_create_signing_key(*secrets_),
      identity::PasswordHasher{options.kdf},
      identity::IdentityConfig{config_.access_ttl, config_.refresh_ttl});
  if (!config_.bootstrap_admin_id.empty()) {
    if (identity_->bootstrap_admin(config_.bootstrap_admin_id, config_.bootstrap_admin_password)) {
      std::clog << "created bootstrap administrator " << config_.bootstrap_admin_id << '\n';
    }
  }
  if (!config_.monitor_credentials_file.empty()) {
    monitors_ = MonitorRegistry::load(config_.monitor_credentials_file);
  }
  api_ = std::make_unique<Api>(ApiContext{*logs_, *policies_, *identity_, monitors_, *clock_,
                                          config_.cors_origins, std::string{build_version()}});
}

Deployment::~Deployment() {
  stop();
  for (auto& t : threads_) {
    if (t.joinable()) t.join();
  }
}

bool Deployment::bind() {
  auto add = [&](Service service, int port) {
    auto server = std::make_unique<HttpServer>(*api_, service);
    int bound = server->bind(config_.host, port);
    if (bound < 0) {
      std::cerr << "cannot bind " << config_.host << ':' << port << '\n';
      return -1;
    }
    servers_.push_back(std::move(server));
    return bound;
  };
  switch (config_.mode) {
    case Mode::All:
      log_port_ = sso_port_ = add(Service::Both, config_.log_port);
      break;
    case Mode::Log:
      log_port_ = add(Service::Log, config_.log_port);
      break;
    case Mode::Sso:
      sso_port_ = add(Service::Sso, config_.sso_port);
      break;
  }
  if (servers_.empty() || (config_.mode == Mode::All ? log_port_ : std::max(log_port_, sso_port_)) < 0) {
    servers_.clear();
    return false;
  }
  return true;
}

void Deployment::start() {
  for (auto& server : servers_) {
    threads_.emplace_back([s = server.get()] { s->listen(); });
  }
  for (auto& server : servers_) server->wait_until_ready();
}

void Deployment::wait() {
  for (auto& t : threads_) {
    if (t.joinable()) t.join();
  }
}

void Deployment::stop() {
  for (auto& server : servers_) server->stop();
}

}  // namespace itt::gateway
