#include "itt/client/api_client.hpp"

#include <httplib.h>

#include "itt/core/crypto.hpp"

namespace itt::client {

nlohmann::json ClientResponse::json() const {
  return nlohmann::json::parse(body, nullptr, false);
}

std::string ClientResponse::describe_error() const {
  if (status == 0) return "request failed: " + transport_error;
  auto doc = json();
  if (doc.is_object() && doc.contains("error") && doc["error"].is_object()) {
    const auto& err = doc["error"];
    std::string out = err.value("code", "error") + ": " + err.value("message", "");
    if (err.contains("details") && err["details"].is_array()) {
      for (const auto& d : err["details"]) {
        out += "\n  " + d.value("field", "") + ": " + d.value("message", "");
      }
    } else if (err.contains("field")) {
      out += " (field " + err.value("field", "") + ")";
    }
    return out;
  }
  return "HTTP " + std::to_string(status);
}

int exit_code_for(const ClientResponse& response) noexcept {
  if (response.ok()) return kOk;
  if (response.status == 401 || response.status == 403) return kAuth;
  if (response.status >= 400 && response.status < 500) return kValidation;
  return kNetwork;
}

ApiClient::ApiClient(std::string base_url, Credentials credentials, std::ostream* log)
    : base_url_(std::move(base_url)), credentials_(std::move(credentials)), log_(log) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

ClientResponse ApiClient::get(const std::string& path,
                              const std::multimap<std::string, std::string>& query) const {
  return send("GET", path, query, std::nullopt);
}

ClientResponse ApiClient::post(const std::string& path, const nlohmann::json& body) const {
  return send("POST", path, {}, body.dump());
}

ClientResponse ApiClient::put(const std::string& path, const nlohmann::json& body) const {
  return send("PUT", path, {}, body.dump());
}

ClientResponse ApiClient::del(const std::string& path) const {
  return send("DELETE", path, {}, std::nullopt);
}

ClientResponse ApiClient::send(const std::string& method, const std::string& path,
                               const std::multimap<std::string, std::string>& query,
                               const std::optional<std::string>& body) const {
  ClientResponse out;
  httplib::Client http{base_url_};
  if (!http.is_valid()) {
    out.transport_error = "invalid endpoint " + base_url_;
    return out;
  }
  http.set_connection_timeout(5);
  http.set_read_timeout(60);

  httplib::Headers headers;
  std::string auth_note = "none";
  if (credentials_.bearer) {
    headers.emplace("Authorization", "Bearer " + *credentials_.bearer);
    auth_note = "Bearer [redacted]";
  } else if (credentials_.basic) {
    headers.emplace("Authorization",
                    "Basic " + crypto::base64_encode(credentials_.basic->first + ":" +
                                                     credentials_.basic->second));
    auth_note = "Basic " + credentials_.basic->first + ":[redacted]";
  }

  std::string target = path;
  if (!query.empty()) {
    httplib::Params params{query.begin(), query.end()};
    target = httplib::append_query_params(path, params);
  }
  if (log_ != nullptr) {
    *log_ << "-> " << method << ' ' << base_url_ << target << " (auth: " << auth_note << ")\n";
  }

  httplib::Result result;
  if (method == "GET") {
    result = http.Get(target, headers);
  } else if (method == "POST") {
    result = http.Post(target, headers, body.value_or("{}"), "application/json");
  } else if (method == "PUT") {
    result = http.Put(target, headers, body.value_or("{}"), "application/json");
  } else {
    result = http.Delete(target, headers);
  }

  if (!result) {
    out.transport_error = httplib::to_string(result.error());
  } else {
    out.status = result->status;
    out.body = result->body;
    for (const auto& [key, value] : result->headers) out.headers.emplace(key, value);
  }
  if (log_ != nullptr) *log_ << "<- " << (out.status == 0 ? out.transport_error : std::to_string(out.status)) << '\n';
  return out;
}

std::string encode_path_segment(std::string_view segment) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : segment) {
    if (std::isalnum(c) != 0 || c == '-' || c == '_' || c == '.' || c == '~' || c == '@') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0x0f]);
    }
  }
  return out;
}

}  // namespace itt::client
