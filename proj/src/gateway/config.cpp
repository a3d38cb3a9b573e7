#include "itt/gateway/config.hpp"

#include <charconv>
#include <cstdlib>
#include <stdexcept>

#include "itt/core/validation.hpp"

namespace itt::gateway {
namespace {

std::optional<std::string> env(const char* name) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') return std::nullopt;
  return std::string{value};
}

long long env_integer(const char* name, long long fallback, long long min, long long max) {
  auto text = env(name);
  if (!text) return fallback;
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
  if (ec != std::errc{} || ptr != text->data() + text->size() || value < min || value > max) {
    throw std::invalid_argument(std::string{name} + " must be an integer in [" +
                                std::to_string(min) + ", " + std::to_string(max) + "]");
  }
  return value;
}

}  // namespace

std::string_view to_string(Mode mode) noexcept {
  switch (mode) {
    case Mode::Log: return "log";
    case Mode::Sso: return "sso";
    case Mode::All: return "all";
  }
  return "all";
}

std::optional<Mode> parse_mode(std::string_view text) noexcept {
  if (text == "log") return Mode::Log;
  if (text == "sso") return Mode::Sso;
  if (text == "all") return Mode::All;
  return std::nullopt;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    if (auto item = trim(text.substr(start, end - start)); !item.empty()) out.push_back(item);
    start = end + 1;
  }
  return out;
}

GatewayConfig config_from_env() {
  GatewayConfig c;
  if (auto mode = env("ITT_MODE")) {
    auto parsed = parse_mode(*mode);
    if (!parsed) throw std::invalid_argument("ITT_MODE must be one of log, sso, all");
    c.mode = *parsed;
  }
  c.log_port = static_cast<int>(env_integer("ITT_LOG_PORT", c.log_port, 0, 65535));
  c.sso_port = static_cast<int>(env_integer("ITT_SSO_PORT", c.sso_port, 0, 65535));
  c.db_path = env("ITT_DB_PATH").value_or(c.db_path);
  c.signing_key_file = env("ITT_SIGNING_KEY_FILE").value_or(c.signing_key_file);
  c.bootstrap_admin_id = env("ITT_BOOTSTRAP_ADMIN_ID").value_or("");
  c.bootstrap_admin_password = env("ITT_BOOTSTRAP_ADMIN_PASSWORD").value_or("");
  c.monitor_credentials_file = env("ITT_MONITOR_CREDENTIALS_FILE").value_or("");
  if (auto origins = env("ITT_CORS_ORIGINS")) c.cors_origins = split_list(*origins);
  constexpr long long kYear = 366LL * 24 * 60 * 60;
  c.access_ttl = std::chrono::seconds{
      env_integer("ITT_ACCESS_TTL_SECONDS", c.access_ttl.count(), 1, kYear)};
  c.refresh_ttl = std::chrono::seconds{
      env_integer("ITT_REFRESH_TTL_SECONDS", c.refresh_ttl.count(), 1, kYear)};
  return c;
}

}  // namespace itt::gateway
