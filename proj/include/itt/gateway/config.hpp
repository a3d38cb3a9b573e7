#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace itt::gateway {

enum class Mode { Log, Sso, All };

std::string_view to_string(Mode mode) noexcept;
std::optional<Mode> parse_mode(std::string_view text) noexcept;

struct GatewayConfig {
  Mode mode = Mode::All;
  std::string host = "0.0.0.0";
  int log_port = 8081;
  int sso_port = 8082;
  std::string db_path = "itt.db";
  std::string signing_key_file = "itt-signing.key";
  std::string bootstrap_admin_id;
  std::string bootstrap_admin_password;
  std::string monitor_credentials_file;
  std::vector<std::string> cors_origins;
  std::chrono::seconds access_ttl{30 * 60};
  std::chrono::seconds refresh_ttl{7 * 24 * 60 * 60};
};

/// Defaults overlaid with the ITT_* environment variables. Throws
/// std::invalid_argument naming the variable on a malformed value.
GatewayConfig config_from_env();

std::vector<std::string> split_list(std::string_view text);

}  // namespace itt::gateway
