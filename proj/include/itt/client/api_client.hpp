#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

#include <json.hpp>

namespace itt::client {

// Stable process exit codes of the CLI.
enum ExitCode : int { kOk = 0, kValidation = 1, kAuth = 2, kNetwork = 3 };

struct Credentials {
  std::optional<std::string> bearer;
  std::optional<std::pair<std::string, std::string>> basic;  // client id, secret
};

struct ClientResponse {
  int status = 0;  // 0: no HTTP response at all
  std::string body;
  std::string transport_error;
  std::map<std::string, std::string> headers;

  bool ok() const { return status >= 200 && status < 300; }
  nlohmann::json json() const;
  /// "code: message" from an error body, or a transport description.
  std::string describe_error() const;
};

/// 2xx -> 0; 401/403 -> auth; other 4xx -> validation; no response or 5xx -> network/server.
int exit_code_for(const ClientResponse& response) noexcept;

class ApiClient {
 public:
  /// `log` receives one line per request when set; credentials are redacted.
  ApiClient(std::string base_url, Credentials credentials, std::ostream* log = nullptr);

  ClientResponse get(const std::string& path,
                     const std::multimap<std::string, std::string>& query = {}) const;
  ClientResponse post(const std::string& path, const nlohmann::json& body) const;
  ClientResponse put(const std::string& path, const nlohmann::json& body) const;
  ClientResponse del(const std::string& path) const;

  const std::string& base_url() const { return base_url_; }

 private:
  ClientResponse send(const std::string& method, const std::string& path,
                      const std::multimap<std::string, std::string>& query,
                      const std::optional<std::string>& body) const;

  std::string base_url_;
  Credentials credentials_;
  std::ostream* log_;
};

/// Percent-encodes one path segment.
std::string encode_path_segment(std::string_view segment);

}  // namespace itt::client
