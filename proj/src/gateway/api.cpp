#include "itt/gateway/api.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <iostream>
#include <set>

#include "itt/core/crypto.hpp"
#include "itt/core/error.hpp"
#include "itt/core/validation.hpp"
#include "itt/gateway/json_codec.hpp"

namespace itt::gateway {
namespace {

// A response decided before or instead of the handler's normal path.
struct HttpError {
  int status;
  json body;
  std::vector<std::pair<std::string, std::string>> headers{};
};

HttpError http_error(int status, std::string_view code, std::string_view message,
                     std::string_view field = {}) {
  return HttpError{status, error_body(code, message, field)};
}

int status_for(Errc code) {
  switch (code) {
    case Errc::validation:
    case Errc::invalid_range:
    case Errc::unknown_identifier:
    case Errc::weak_password: return 422;
    case Errc::not_found: return 404;
    case Errc::forbidden: return 403;
    case Errc::duplicate_identifier:
    case Errc::last_admin: return 409;
    case Errc::unauthorized:
    case Errc::authentication_failed:
    case Errc::token_malformed:
    case Errc::token_bad_signature:
    case Errc::token_expired:
    case Errc::token_revoked:
    case Errc::token_wrong_kind: return 401;
    case Errc::storage: return 503;
  }
  return 500;
}

std::string lower(std::string_view text) {
  std::string out{text};
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Splits "Scheme credentials"; scheme compared case-insensitively.
std::optional<std::string> credentials_for(const ApiRequest& req, std::string_view scheme) {
  auto header = req.header("authorization");
  if (!header) return std::nullopt;
  auto space = header->find(' ');
  if (space == std::string::npos || lower(header->substr(0, space)) != scheme) return std::nullopt;
  return trim(std::string_view{*header}.substr(space + 1));
}

struct Call {
  const ApiRequest& request;
  std::map<std::string, std::string> params;
  std::optional<Principal> principal;

  const std::string& principal_id() const { return principal->id; }
};

using Handler = ApiResponse (*)(const ApiContext&, const Call&);

struct Route {
  RouteSpec spec;
  Handler handler;
};

ApiResponse json_response(int status, const json& body) {
  ApiResponse r;
  r.status = status;
  r.body = body.dump();
  return r;
}

ApiResponse no_content() {
  ApiResponse r;
  r.status = 204;
  r.content_type.clear();
  return r;
}

json parse_body(const ApiRequest& req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw http_error(400, "bad_request", "request body must be a JSON object");
  }
  return body;
}

void reject_unknown_fields(const json& body, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : body.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      std::string message = key == "password"
                                ? "passwords cannot be changed through this route"
                                : "unknown field '" + key + "'";
      throw http_error(422, "validation_failed", message, key);
    }
  }
}

std::optional<std::string> optional_string(const json& body, std::string_view key) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw http_error(422, "validation_failed", "must be a string", key);
  return it->get<std::string>();
}

std::string required_string(const json& body, std::string_view key) {
  auto value = optional_string(body, key);
  if (!value) throw http_error(422, "validation_failed", "is required", key);
  return *value;
}

std::optional<std::vector<std::string>> optional_string_list(const json& body,
                                                             std::string_view key) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_array()) throw http_error(422, "validation_failed", "must be an array of strings", key);
  std::vector<std::string> out;
  for (const auto& item : *it) {
    if (!item.is_string()) {
      throw http_error(422, "validation_failed", "must be an array of strings", key);
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::optional<bool> optional_bool(const json& body, std::string_view key) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_boolean()) throw http_error(422, "validation_failed", "must be a boolean", key);
  return it->get<bool>();
}

std::optional<Timestamp> query_timestamp(const ApiRequest& req, std::string_view key) {
  auto text = req.query_param(key);
  if (!text) return std::nullopt;
  auto ts = parse_timestamp(*text);
  if (!ts) throw http_error(422, "validation_failed", "must be an RFC 3339 timestamp", key);
  return ts;
}

std::optional<std::int64_t> query_integer(const ApiRequest& req, std::string_view key) {
  auto text = req.query_param(key);
  if (!text) return std::nullopt;
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
  if (ec != std::errc{} || ptr != text->data() + text->size()) {
    throw http_error(422, "validation_failed", "must be an integer", key);
  }
  return value;
}

// Owner-scoped routes act on the principal's data only. A request that
// names an owner must name the principal (by any of their identifiers).
void require_own_scope(const ApiContext& ctx, const Call& call, std::optional<std::string> named) {
  if (!named) return;
  std::string resolved;
  try {
    resolved = ctx.identity.resolve_identifier(*named);
  } catch (const Error&) {
    resolved.clear();
  }
  if (resolved != call.principal_id()) {
    throw http_error(403, "forbidden", "cannot access another owner's data", "owner");
  }
}

std::string resolve_field(const ApiContext& ctx, const std::string& value, std::string_view field) {
  try {
    return ctx.identity.resolve_identifier(value);
  } catch (const Error& e) {
    if (e.code() == Errc::unknown_identifier || e.code() == Errc::validation) {
      throw http_error(422, "unknown_identifier", "unknown identifier '" + trim(value) + "'", field);
    }
    throw;
  }
}

// --- PUBLIC -----------------------------------------------------------------

ApiResponse handle_health(const ApiContext& ctx, const Call&) {
  bool store_ok = ctx.logs.healthy();
  bool identity_ok = ctx.identity.healthy();
  bool ok = store_ok && identity_ok;
  return json_response(ok ? 200 : 503, {{"status", ok ? "ok" : "degraded"},
                                        {"store_ok", store_ok},
                                        {"identity_ok", identity_ok},
                                        {"version", ctx.version}});
}

ApiResponse handle_openapi(const ApiContext&, const Call&) {
  ApiResponse r;
  r.body = openapi_document();
  return r;
}

ApiResponse handle_login(const ApiContext& ctx, const Call& call) {
  json body = parse_body(call.request);
  std::string identifier = required_string(body, "identifier");
  std::string password = required_string(body, "password");
  try {
    return json_response(200, to_json(ctx.identity.login(identifier, password)));
  } catch (const Error& e) {
    if (e.code() == Errc::authentication_failed) {
      throw http_error(401, "authentication_failed", "invalid credentials");
    }
    throw;
  }
}

ApiResponse handle_refresh(const ApiContext& ctx, const Call& call) {
  json body = parse_body(call.request);
  std::string token = required_string(body, "refresh_token");
  return json_response(200, to_json(ctx.identity.refresh(token)));
}

// --- SSO, bearer --------------------------------------------------------------

ApiResponse handle_logout(const ApiContext& ctx, const Call& call) {
  ctx.identity.logout(credentials_for(call.request, "bearer").value_or(""));
  return no_content();
}

ApiResponse handle_list_users(const ApiContext& ctx, const Call&) {
  json users = json::array();
  for (const auto& u : ctx.identity.list_users()) users.push_back(to_json(u));
  return json_response(200, {{"users", users}});
}

ApiResponse handle_create_user(const ApiContext& ctx, const Call& call) {
  json body = parse_body(call.request);
  reject_unknown_fields(body, {"main_id", "secondary_ids", "password", "is_admin"});
  identity::NewUser user;
  user.main_id = required_string(body, "main_id");
  user.secondary_ids = optional_string_list(body, "secondary_ids").value_or(std::vector<std::string>{});
  user.password = required_string(body, "password");
  user.is_admin = optional_bool(body, "is_admin").value_or(false);
  return json_response(201, to_json(ctx.identity.create_user(call.principal_id(), user)));
}

ApiResponse handle_get_user(const ApiContext& ctx, const Call& call) {
  const auto& target = call.params.at("id");
  if (call.principal->kind != Principal::Kind::Admin && target != call.principal_id()) {
    throw http_error(403, "forbidden", "not allowed to view this user");
  }
  auto user = ctx.identity.find_user(target);
  if (!user) throw http_error(404, "not_found", "no user " + target);
  return json_response(200, to_json(*user));
}

ApiResponse handle_update_user(const ApiContext& ctx, const Call& call) {
  json body = parse_body(call.request);
  reject_unknown_fields(body, {"secondary_ids", "is_admin"});
  identity::UserChanges changes;
  changes.secondary_ids = optional_string_list(body, "secondary_ids");
  changes.is_admin = optional_bool(body, "is_admin");
  return json_response(
      200, to_json(ctx.identity.update_user(call.principal_id(), call.params.at("id"), changes)));
}

ApiResponse handle_delete_user(const ApiContext& ctx, const Call& call) {
  ctx.identity.delete_user(call.principal_id(), call.params.at("id"));
  return no_content();
}

ApiResponse handle_change_password(const ApiContext& ctx, const Call& call) {
  if (call.params.at("id") != call.principal_id()) {
    throw http_error(403, "forbidden", "passwords can only be changed by their owner");
  }
  json body = parse_body(call.request);
  reject_unknown_fields(body, {"current_password", "new_password"});
  ctx.identity.change_password(call.principal_id(), required_string(body, "current_password"),
                               required_string(body, "new_password"));
  return no_content();
}

ApiResponse handle_resolve(const ApiContext& ctx, const Call& call) {
  auto identifier = call.request.query_param("identifier");
  if (!identifier || trim(*identifier).empty()) {
    throw http_error(422, "validation_failed", "is required", "identifier");
  }
  try {
    return json_response(200, {{"identifier", trim(*identifier)},
                               {"main_id", ctx.identity.resolve_identifier(*identifier)}});
  } catch (const Error& e) {
    if (e.code() == Errc::unknown_identifier) {
      throw http_error(404, "unknown_identifier", e.what(), "identifier");
    }
    throw;
  }
}

// --- log service ------------------------------------------------------------

ApiResponse handle_ingest(const ApiContext& ctx, const Call& call) {
  json body = parse_body(call.request);
  LogSubmission submission;
  std::vector<FieldError> type_errors;
  auto field = [&](std::string_view key, std::string& out) {
    auto it = body.find(key);
    if (it == body.end() || it->is_null()) return;
    if (it->is_string()) {
      out = it->get<std::string>();
    } else {
      type_errors.push_back({std::string{key}, "must be a string"});
    }
  };
  field("occurred_at", submission.occurred_at);
  field("owner", submission.owner);
  field("consumer", submission.consumer);
  field("tool", submission.tool);
  field("data_category", submission.data_category);
  field("purpose", submission.purpose);
  field("access_kind", submission.access_kind);
  if (!type_errors.empty()) return json_response(422, validation_body(type_errors));

  auto validated = validate_log_submission(submission, ctx.clock.now());
  if (auto* errors = std::get_if<std::vector<FieldError>>(&validated)) {
    return json_response(422, validation_body(*errors));
  }
  LogDraft draft = std::get<LogDraft>(validated);
  draft.owner = resolve_field(ctx, draft.owner, "owner");
  draft.consumer = resolve_field(ctx, draft.consumer, "consumer");
  auto decision = ctx.policies.evaluate(draft.owner, draft.consumer, draft.data_category);
  auto entry = ctx.logs.append(draft, decision.effect);
  json out = to_json(entry);
  out["policy_decision"] = to_json(decision);
  return json_response(201, out);
}

ApiResponse handle_query_logs(const ApiContext& ctx, const Call& call) {
  const auto& req = call.request;
  require_own_scope(ctx, call, req.query_param("owner"));
  logstore::LogQuery q;
  q.owner = call.principal_id();
  q.from = query_timestamp(req, "from");
  q.to = query_timestamp(req, "to");
  q.consumer = req.query_param("consumer");
  q.tool = req.query_param("tool");
  q.data_category = req.query_param("data_category");
  q.page = query_integer(req, "page").value_or(1);
  q.per_page = query_integer(req, "per_page").value_or(50);
  if (auto order = req.query_param("order")) {
    auto parsed = logstore::parse_sort_order(*order);
    if (!parsed) {
      throw http_error(422, "validation_failed",
                       "must be occurred_at_desc or occurred_at_asc", "order");
    }
    q.order = *parsed;
  }
  return json_response(200, to_json(ctx.logs.query(q)));
}

ApiResponse handle_summary(const ApiContext& ctx, const Call& call) {
  require_own_scope(ctx, call, call.request.query_param("owner"));
  auto days = query_integer(call.request, "days").value_or(7);
  if (days < 1 || days > 3660) {
    throw http_error(422, "validation_failed", "must be within 1..3660", "days");
  }
  // Stored times are whole seconds; the current second is inside the window.
  auto now = ctx.clock.now() + std::chrono::seconds{1};
  return json_response(200, to_json(ctx.logs.summarize(call.principal_id(), now,
                                                       static_cast<int>(days))));
}

ApiResponse handle_export(const ApiContext& ctx, const Call& call) {
  require_own_scope(ctx, call, call.request.query_param("owner"));
  auto from = query_timestamp(call.request, "from");
  auto to = query_timestamp(call.request, "to");
  if (!from) throw http_error(422, "validation_failed", "is required", "from");
  if (!to) throw http_error(422, "validation_failed", "is required", "to");
  auto report = ctx.logs.export_report(call.principal_id(), *from, *to);
  ApiResponse r;
  r.content_type = report.media_type;
  r.body = std::move(report.body);
  r.headers.emplace_back("Content-Disposition", "attachment; filename=\"" + report.filename + "\"");
  return r;
}

ApiResponse handle_verify(const ApiContext& ctx, const Call&) {
  return json_response(200, to_json(ctx.logs.verify_chain()));
}

ApiResponse handle_list_policies(const ApiContext& ctx, const Call& call) {
  require_own_scope(ctx, call, call.request.query_param("owner"));
  json policies = json::array();
  for (const auto& p : ctx.policies.list_policies(call.principal_id())) policies.push_back(to_json(p));
  return json_response(200, {{"policies", policies}});
}

ApiResponse handle_set_policy(const ApiContext& ctx, const Call& call) {
  json body = parse_body(call.request);
  reject_unknown_fields(body, {"owner", "subject", "data_category", "effect"});
  require_own_scope(ctx, call, optional_string(body, "owner"));
  std::string subject = trim(required_string(body, "subject"));
  std::string category = required_string(body, "data_category");
  auto effect = parse_effect(trim(required_string(body, "effect")));
  if (!effect) throw http_error(422, "validation_failed", "must be allow or deny", "effect");
  if (!subject.empty() && subject != kWildcard) subject = resolve_field(ctx, subject, "subject");
  return json_response(201, to_json(ctx.policies.set_policy(call.principal_id(), subject, category,
                                                            *effect)));
}

ApiResponse handle_delete_policy(const ApiContext& ctx, const Call& call) {
  ctx.policies.delete_policy(call.principal_id(), call.params.at("id"));
  return no_content();
}

ApiResponse handle_evaluate(const ApiContext& ctx, const Call& call) {
  json body = parse_body(call.request);
  std::string owner = resolve_field(ctx, required_string(body, "owner"), "owner");
  std::string consumer_raw = trim(required_string(body, "consumer"));
  if (consumer_raw == kWildcard) {
    throw http_error(422, "validation_failed", "must be a concrete identifier", "consumer");
  }
  std::string consumer = resolve_field(ctx, consumer_raw, "consumer");
  std::string category = trim(required_string(body, "data_category"));
  return json_response(200, to_json(ctx.policies.evaluate(owner, consumer, category)));
}

const std::vector<Route>& route_table() {
  using RC = RouteClass;
  using S = Service;
  static const std::vector<Route> table = {
      {{"GET", "/api/v1/health", RC::Public, S::Both}, handle_health},
      {{"GET", "/api/v1/openapi.json", RC::Public, S::Both}, handle_openapi},
      {{"POST", "/api/v1/login", RC::Public, S::Sso}, handle_login},
      {{"POST", "/api/v1/refresh", RC::Public, S::Sso}, handle_refresh},
      {{"POST", "/api/v1/logout", RC::Owner, S::Sso}, handle_logout},
      {{"GET", "/api/v1/users", RC::Admin, S::Sso}, handle_list_users},
      {{"POST", "/api/v1/users", RC::Admin, S::Sso}, handle_create_user},
      {{"GET", "/api/v1/users/{id}", RC::Owner, S::Sso}, handle_get_user},
      {{"PUT", "/api/v1/users/{id}", RC::Owner, S::Sso}, handle_update_user},
      {{"DELETE", "/api/v1/users/{id}", RC::Admin, S::Sso}, handle_delete_user},
      {{"POST", "/api/v1/users/{id}/password", RC::Owner, S::Sso}, handle_change_password},
      {{"GET", "/api/v1/resolve", RC::Ingest, S::Sso}, handle_resolve},
      {{"POST", "/api/v1/logs", RC::Ingest, S::Log}, handle_ingest},
      {{"GET", "/api/v1/logs", RC::Owner, S::Log}, handle_query_logs},
      {{"GET", "/api/v1/logs/summary", RC::Owner, S::Log}, handle_summary},
      {{"GET", "/api/v1/logs/export", RC::Owner, S::Log}, handle_export},
      {{"GET", "/api/v1/logs/verify", RC::Admin, S::Log}, handle_verify},
      {{"GET", "/api/v1/policies", RC::Owner, S::Log}, handle_list_policies},
      {{"POST", "/api/v1/policies", RC::Owner, S::Log}, handle_set_policy},
      {{"DELETE", "/api/v1/policies/{id}", RC::Owner, S::Log}, handle_delete_policy},
      {{"POST", "/api/v1/policies/evaluate", RC::Ingest, S::Log}, handle_evaluate},
  };
  return table;
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> out;
  std::size_t start = 1;
  while (start <= path.size()) {
    auto end = path.find('/', start);
    if (end == std::string_view::npos) end = path.size();
    out.push_back(path.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

// Malformed escapes are kept literally.
std::string percent_decode(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    unsigned value = 0;
    if (text[i] == '%' && i + 2 < text.size() &&
        std::from_chars(text.data() + i + 1, text.data() + i + 3, value, 16).ptr ==
            text.data() + i + 3) {
      out.push_back(static_cast<char>(value));
      i += 2;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

std::optional<std::map<std::string, std::string>> match_path(std::string_view pattern,
                                                             std::string_view path) {
  auto want = split_path(pattern);
  auto got = split_path(path);
  if (want.size() != got.size()) return std::nullopt;
  std::map<std::string, std::string> params;
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (want[i].size() > 2 && want[i].front() == '{' && want[i].back() == '}') {
      if (got[i].empty()) return std::nullopt;
      params.emplace(want[i].substr(1, want[i].size() - 2), percent_decode(got[i]));
    } else if (want[i] != percent_decode(got[i])) {
      return std::nullopt;
    }
  }
  return params;
}

HttpError unauthorized(RouteClass rc, std::string_view code, std::string_view message) {
  HttpError err = http_error(401, code, message);
  err.headers.emplace_back("WWW-Authenticate",
                           rc == RouteClass::Ingest ? "Basic realm=\"itt\"" : "Bearer realm=\"itt\"");
  return err;
}

std::optional<Principal> authenticate(const ApiContext& ctx, const ApiRequest& req,
                                      RouteClass rc) {
  if (rc == RouteClass::Public) return std::nullopt;

  if (rc == RouteClass::Ingest) {
    auto encoded = credentials_for(req, "basic");
    if (!encoded) throw unauthorized(rc, "unauthorized", "monitor basic credentials required");
    auto decoded = crypto::base64_decode(*encoded);
    auto colon = decoded ? decoded->find(':') : std::string::npos;
    if (colon == std::string::npos ||
        !ctx.monitors.authenticate(decoded->substr(0, colon), decoded->substr(colon + 1))) {
      throw unauthorized(rc, "unauthorized", "invalid monitor credentials");
    }
    return Principal{Principal::Kind::Monitor, decoded->substr(0, colon)};
  }

  auto token = credentials_for(req, "bearer");
  if (!token) throw unauthorized(rc, "unauthorized", "bearer access token required");
  identity::TokenClaims claims;
  try {
    claims = ctx.identity.verify_token(*token);
  } catch (const Error& e) {
    throw unauthorized(rc, errc_name(e.code()), e.what());
  }
  if (claims.kind != TokenKind::Access) {
    throw unauthorized(rc, errc_name(Errc::token_wrong_kind), "an access token is required");
  }
  bool admin = ctx.identity.is_admin(claims.principal);
  if (rc == RouteClass::Admin && !admin) {
    throw http_error(403, "forbidden", "administrator rights required");
  }
  return Principal{admin ? Principal::Kind::Admin : Principal::Kind::User, claims.principal};
}

bool serves(Service serving, Service route) {
  return serving == Service::Both || route == Service::Both || serving == route;
}

void apply_cors(const ApiContext& ctx, const ApiRequest& req, ApiResponse& resp) {
  auto origin = req.header("origin");
  if (!origin) return;
  bool allowed = std::any_of(ctx.cors_origins.begin(), ctx.cors_origins.end(),
                             [&](const std::string& o) { return o == "*" || o == *origin; });
  if (!allowed) return;
  resp.headers.emplace_back("Access-Control-Allow-Origin", *origin);
  resp.headers.emplace_back("Access-Control-Allow-Credentials", "true");
  resp.headers.emplace_back("Access-Control-Expose-Headers", "Content-Disposition");
  resp.headers.emplace_back("Vary", "Origin");
}

ApiResponse from_error(HttpError err) {
  ApiResponse r = json_response(err.status, err.body);
  r.headers = std::move(err.headers);
  return r;
}

ApiResponse dispatch(const ApiContext& ctx, const ApiRequest& req, Service serving) {
  if (req.method == "OPTIONS") {
    ApiResponse r = no_content();
    r.headers.emplace_back("Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS");
    r.headers.emplace_back("Access-Control-Allow-Headers", "Authorization, Content-Type");
    r.headers.emplace_back("Access-Control-Max-Age", "600");
    return r;
  }

  std::set<std::string> allowed_methods;
  for (const auto& route : route_table()) {
    if (!serves(serving, route.spec.service)) continue;
    auto params = match_path(route.spec.pattern, req.path);
    if (!params) continue;
    if (route.spec.method != req.method) {
      allowed_methods.insert(route.spec.method);
      continue;
    }
    try {
      Call call{req, std::move(*params), authenticate(ctx, req, route.spec.route_class)};
      return route.handler(ctx, call);
    } catch (const HttpError& err) {
      return from_error(err);
    } catch (const Error& e) {
      int status = status_for(e.code());
      if (e.code() == Errc::storage) std::cerr << "storage failure: " << e.what() << '\n';
      return json_response(status, error_body(errc_name(e.code()), e.what(), e.field()));
    }
  }
  if (!allowed_methods.empty()) {
    std::string allow;
    for (const auto& m : allowed_methods) allow += (allow.empty() ? "" : ", ") + m;
    ApiResponse r = json_response(405, error_body("method_not_allowed", "method not allowed"));
    r.headers.emplace_back("Allow", allow);
    return r;
  }
  return json_response(404, error_body("not_found", "no such route"));
}

}  // namespace

std::string_view to_string(RouteClass rc) noexcept {
  switch (rc) {
    case RouteClass::Public: return "public";
    case RouteClass::Ingest: return "ingest";
    case RouteClass::Owner: return "owner";
    case RouteClass::Admin: return "admin";
  }
  return "public";
}

std::string_view to_string(Service service) noexcept {
  switch (service) {
    case Service::Log: return "log";
    case Service::Sso: return "sso";
    case Service::Both: return "both";
  }
  return "both";
}

std::optional<std::string> ApiRequest::header(std::string_view name) const {
  auto it = headers.find(lower(name));
  if (it == headers.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> ApiRequest::query_param(std::string_view name) const {
  auto it = query.find(std::string{name});
  if (it == query.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> ApiResponse::header(std::string_view name) const {
  for (const auto& [key, value] : headers) {
    if (lower(key) == lower(name)) return value;
  }
  return std::nullopt;
}

Api::Api(ApiContext context) : ctx_(std::move(context)) {}

const std::vector<RouteSpec>& Api::routes() {
  static const std::vector<RouteSpec> specs = [] {
    std::vector<RouteSpec> out;
    for (const auto& route : route_table()) out.push_back(route.spec);
    return out;
  }();
  return specs;
}

ApiResponse Api::handle(const ApiRequest& request, Service serving) const {
  ApiResponse response;
  try {
    response = dispatch(ctx_, request, serving);
  } catch (const std::exception& e) {
    std::cerr << "unhandled error on " << request.method << ' ' << request.path << ": "
              << e.what() << '\n';
    response = json_response(500, error_body("internal", "internal server error"));
  }
  apply_cors(ctx_, request, response);
  return response;
}

}  // namespace itt::gateway
