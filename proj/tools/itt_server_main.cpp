#include <csignal>
#include <iostream>
#include <pthread.h>
#include <thread>

#include <CLI11.hpp>

#include "itt/gateway/deployment.hpp"
#include "itt/gateway/monitor_registry.hpp"

namespace {

using namespace itt::gateway;

int add_monitor(const std::string& file, const std::string& client_id) {
  if (file.empty()) {
    std::cerr << "error: set --monitor-credentials-file or ITT_MONITOR_CREDENTIALS_FILE\n";
    return 1;
  }
  std::string secret;
  std::getline(std::cin, secret);
  if (secret.empty()) {
    std::cerr << "error: read an empty secret from stdin\n";
    return 1;
  }
  try {
    MonitorRegistry registry =
        std::filesystem::exists(file) ? MonitorRegistry::load(file) : MonitorRegistry{};
    registry.add(client_id, secret);
    registry.save(file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::cout << "added monitor " << client_id << '\n';
  return 0;
}

int serve(GatewayConfig config) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  std::unique_ptr<Deployment> deployment;
  try {
    deployment = std::make_unique<Deployment>(config);
  } catch (const std::exception& e) {
    std::cerr << "itt-server: " << e.what() << '\n';
    return 1;
  }
  if (!deployment->bind()) {
    std::cerr << "itt-server: cannot bind " << config.host << '\n';
    return 1;
  }
  deployment->start();
  if (config.mode != Mode::Sso) std::cout << "log service on port " << deployment->log_port() << '\n';
  if (config.mode == Mode::Sso) std::cout << "sso service on port " << deployment->sso_port() << '\n';
  std::cout << std::flush;

  std::thread waiter{[&] {
    int received = 0;
    sigwait(&signals, &received);
    deployment->stop();
  }};
  deployment->wait();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  GatewayConfig config;
  try {
    config = config_from_env();
  } catch (const std::exception& e) {
    std::cerr << "itt-server: " << e.what() << '\n';
    return 1;
  }

  CLI::App app{"itt-server: usage-log and single sign-on services", "itt-server"};
  std::string mode{to_string(config.mode)};
  app.add_option("--mode", mode, "log, sso or all (ITT_MODE)")
      ->check(CLI::IsMember({"log", "sso", "all"}))
      ->capture_default_str();
  app.add_option("--host", config.host)->capture_default_str();
  app.add_option("--log-port", config.log_port, "0 picks a free port (ITT_LOG_PORT)")
      ->capture_default_str();
  app.add_option("--sso-port", config.sso_port, "ITT_SSO_PORT")->capture_default_str();
  app.add_option("--db", config.db_path, "SQLite file (ITT_DB_PATH)")->capture_default_str();
  app.add_option("--signing-key-file", config.signing_key_file, "ITT_SIGNING_KEY_FILE")
      ->capture_default_str();
  app.add_option("--monitor-credentials-file", config.monitor_credentials_file,
                 "ITT_MONITOR_CREDENTIALS_FILE");
  app.set_version_flag("--version", std::string{build_version()});

  std::string client_id;
  auto* add = app.add_subcommand("add-monitor", "Register a monitor; reads the secret from stdin");
  add->add_option("client_id", client_id)->required();
  auto* openapi = app.add_subcommand("openapi", "Print the API description");

  CLI11_PARSE(app, argc, argv);
  config.mode = *parse_mode(mode);

  if (*add) return add_monitor(config.monitor_credentials_file, client_id);
  if (*openapi) {
    std::cout << openapi_document() << '\n';
    return 0;
  }
  return serve(config);
}
