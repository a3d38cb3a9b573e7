#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "itt/core/time.hpp"
#include "itt/gateway/monitor_registry.hpp"
#include "itt/identity/identity_service.hpp"
#include "itt/logstore/log_store.hpp"
#include "itt/policy/policy_store.hpp"

namespace itt::gateway {

enum class RouteClass { Public, Ingest, Owner, Admin };
enum class Service { Log, Sso, Both };

std::string_view to_string(RouteClass route_class) noexcept;
std::string_view to_string(Service service) noexcept;

struct Principal {
  enum class Kind { User, Admin, Monitor };
  Kind kind = Kind::User;
  std::string id;
};

struct ApiRequest {
  std::string method;
  std::string path;  // percent-encoding is decoded per segment
  std::multimap<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // lower-case names
  std::string body;

  std::optional<std::string> header(std::string_view name) const;
  std::optional<std::string> query_param(std::string_view name) const;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;

  std::optional<std::string> header(std::string_view name) const;
};

struct RouteSpec {
  std::string method;
  std::string pattern;  // segments like {id} capture
  RouteClass route_class;
  Service service;
};

struct ApiContext {
  logstore::LogStore& logs;
  policy::PolicyStore& policies;
  identity::IdentityService& identity;
  const MonitorRegistry& monitors;
  const Clock& clock;
  std::vector<std::string> cors_origins;
  std::string version;
};

// Transport-independent HTTP surface: routing, authentication by route
// class, owner scoping, JSON mapping. The socket layer only converts to and
// from ApiRequest/ApiResponse.
class Api {
 public:
  explicit Api(ApiContext context);

  ApiResponse handle(const ApiRequest& request, Service serving = Service::Both) const;

  /// Every implemented route, in matching order.
  static const std::vector<RouteSpec>& routes();

 private:
  ApiContext ctx_;
};

/// Served at GET /api/v1/openapi.json.
const std::string& openapi_document();

}  // namespace itt::gateway
