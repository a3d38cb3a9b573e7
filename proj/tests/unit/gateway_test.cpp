#include <gtest/gtest.h>

#include <json.hpp>
#include <fstream>
#include <set>

#include "auth_matrix.hpp"
#include "itt/gateway/config.hpp"
#include "itt/gateway/monitor_registry.hpp"

using namespace itt;
using namespace itt::gateway;
using nlohmann::json;
using fixture::request;

TEST(Gateway, AuthMatrix) {
  auto cells = fixture::run_auth_matrix();
  EXPECT_EQ(cells.size(), Api::routes().size() * 5);
  for (const auto& c : cells) {
    EXPECT_TRUE(c.pass()) << c.route << " with " << fixture::to_string(c.cred) << ": got "
                          << c.status << ", want " << c.expected;
  }
}

TEST(Gateway, OwnerScoping) {
  for (const auto& f : fixture::run_owner_scoping(3)) ADD_FAILURE() << f.detail;
}

TEST(Gateway, UnauthorizedCarriesChallengeAndErrorShape) {
  fixture::MatrixStack s;
  auto r = s.api.handle(request("GET", "/api/v1/logs"));
  EXPECT_EQ(r.status, 401);
  EXPECT_EQ(r.header("WWW-Authenticate"), "Bearer realm=\"itt\"");
  auto body = json::parse(r.body);
  EXPECT_TRUE(body["error"]["code"].is_string());
  EXPECT_TRUE(body["error"]["message"].is_string());
  auto ingest = s.api.handle(request("POST", "/api/v1/logs", "{}"));
  EXPECT_EQ(ingest.header("WWW-Authenticate"), "Basic realm=\"itt\"");
  auto wrong = s.api.handle(
      request("POST", "/api/v1/logs", "{}", fixture::basic_header(fixture::kMonitorId, "nope")));
  EXPECT_EQ(wrong.status, 401);
}

TEST(Gateway, RefreshTokenIsNotABearer) {
  fixture::MatrixStack s;
  auto pair = s.identity.login("alice", "alice-password");
  auto r = s.api.handle(request("GET", "/api/v1/logs", {}, "Bearer " + pair.refresh_token));
  EXPECT_EQ(r.status, 401);
  EXPECT_EQ(json::parse(r.body)["error"]["code"], "token_wrong_kind");
}

TEST(Gateway, RoutingErrors) {
  fixture::MatrixStack s;
  EXPECT_EQ(s.api.handle(request("GET", "/api/v1/nothing")).status, 404);
  auto r = s.api.handle(request("PATCH", "/api/v1/policies"));
  EXPECT_EQ(r.status, 405);
  EXPECT_EQ(r.header("Allow"), "GET, POST");
  auto login = s.api.handle(request("POST", "/api/v1/login", "not json"));
  EXPECT_EQ(login.status, 400);
  EXPECT_EQ(s.api.handle(request("POST", "/api/v1/login", R"({"identifier":"alice"})")).status, 422);
  auto bad = s.api.handle(
      request("POST", "/api/v1/login", R"({"identifier":"alice","password":"wrong-password"})"));
  EXPECT_EQ(bad.status, 401);
  EXPECT_EQ(json::parse(bad.body)["error"]["code"], "authentication_failed");
}

TEST(Gateway, ServiceGating) {
  fixture::MatrixStack s;
  auto login = request("POST", "/api/v1/login", R"({"identifier":"alice","password":"alice-password"})");
  EXPECT_EQ(s.api.handle(login, Service::Log).status, 404);
  EXPECT_EQ(s.api.handle(login, Service::Sso).status, 200);
  auto logs = request("POST", "/api/v1/logs", "{}", fixture::basic_header("monitor", "monitor-secret"));
  EXPECT_EQ(s.api.handle(logs, Service::Sso).status, 404);
  EXPECT_EQ(s.api.handle(request("GET", "/api/v1/health"), Service::Sso).status, 200);
  EXPECT_EQ(s.api.handle(request("GET", "/api/v1/health"), Service::Log).status, 200);
}

TEST(Gateway, IngestValidationAndAttribution) {
  fixture::MatrixStack s;
  auto basic = fixture::basic_header(fixture::kMonitorId, fixture::kMonitorSecret);
  auto bad = s.api.handle(request("POST", "/api/v1/logs",
                                  R"({"owner":"","consumer":3,"tool":"t","data_category":"x"})",
                                  basic));
  EXPECT_EQ(bad.status, 422);
  auto unknown = s.api.handle(request(
      "POST", "/api/v1/logs",
      json{{"occurred_at", format_timestamp(s.clock.now())}, {"owner", "ghost"}, {"consumer", "bob"},
           {"tool", "t"}, {"data_category", "hr"}, {"access_kind", "read"}}.dump(),
      basic));
  EXPECT_EQ(unknown.status, 422);
  EXPECT_EQ(json::parse(unknown.body)["error"]["code"], "unknown_identifier");
  EXPECT_EQ(json::parse(unknown.body)["error"]["field"], "owner");

  auto wildcard = s.api.handle(request(
      "POST", "/api/v1/logs",
      json{{"occurred_at", format_timestamp(s.clock.now())}, {"owner", "alice"}, {"consumer", "*"},
           {"tool", "t"}, {"data_category", "hr"}, {"access_kind", "read"}}.dump(),
      basic));
  EXPECT_EQ(json::parse(wildcard.body)["error"]["code"], "unknown_identifier");

  auto ok = s.api.handle(request(
      "POST", "/api/v1/logs",
      json{{"occurred_at", format_timestamp(s.clock.now())}, {"owner", "A-17"}, {"consumer", "bob"},
           {"tool", "t"}, {"data_category", "hr"}, {"access_kind", "read"}}.dump(),
      basic));
  ASSERT_EQ(ok.status, 201);
  auto entry = json::parse(ok.body);
  EXPECT_EQ(entry["owner"], "alice");
  EXPECT_EQ(entry["policy_flag"], "violation");
  EXPECT_EQ(entry["policy_decision"]["effect"], "deny");
}

TEST(Gateway, PolicyRoutesResolveSubjects) {
  fixture::MatrixStack s;
  auto token = "Bearer " + s.identity.login("alice", "alice-password").access_token;
  auto r = s.api.handle(request("POST", "/api/v1/policies",
                                R"({"subject":"nobody","data_category":"*","effect":"deny"})", token));
  EXPECT_EQ(r.status, 422);
  r = s.api.handle(request("POST", "/api/v1/policies",
                           R"({"subject":"bob","data_category":"*","effect":"maybe"})", token));
  EXPECT_EQ(r.status, 422);
  r = s.api.handle(request("DELETE", "/api/v1/policies/missing", {}, token));
  EXPECT_EQ(r.status, 404);
}

TEST(Gateway, UserRoutes) {
  fixture::MatrixStack s;
  auto admin = "Bearer " + s.identity.login("admin", "admin-password").access_token;
  auto alice = "Bearer " + s.identity.login("alice", "alice-password").access_token;
  auto dup = s.api.handle(
      request("POST", "/api/v1/users", R"({"main_id":"x","secondary_ids":["A-17"],"password":"long-enough"})", admin));
  EXPECT_EQ(dup.status, 409);
  auto weak = s.api.handle(request("POST", "/api/v1/users", R"({"main_id":"x","password":"short"})", admin));
  EXPECT_EQ(weak.status, 422);
  auto listed = json::parse(s.api.handle(request("GET", "/api/v1/users", {}, admin)).body);
  for (const auto& u : listed["users"]) {
    EXPECT_FALSE(u.contains("credential_hash"));
    EXPECT_FALSE(u.contains("password"));
  }
  auto sneaky = s.api.handle(
      request("PUT", "/api/v1/users/alice", R"({"password":"new-password"})", alice));
  EXPECT_EQ(sneaky.status, 422);
  auto promote = s.api.handle(request("PUT", "/api/v1/users/alice", R"({"is_admin":true})", alice));
  EXPECT_EQ(promote.status, 403);
  auto last = s.api.handle(request("DELETE", "/api/v1/users/admin", {}, admin));
  EXPECT_EQ(last.status, 409);
  auto resolve = request("GET", "/api/v1/resolve", {}, fixture::basic_header("monitor", "monitor-secret"));
  resolve.query.emplace("identifier", "ghost");
  EXPECT_EQ(s.api.handle(resolve).status, 404);
}

TEST(Gateway, QueryParameterValidation) {
  fixture::MatrixStack s;
  auto token = "Bearer " + s.identity.login("alice", "alice-password").access_token;
  auto with = [&](const char* path, std::multimap<std::string, std::string> q) {
    auto r = request("GET", path, {}, token);
    r.query = std::move(q);
    return s.api.handle(r).status;
  };
  EXPECT_EQ(with("/api/v1/logs", {{"from", "2024-01-02T00:00:00Z"}, {"to", "2024-01-01T00:00:00Z"}}), 422);
  EXPECT_EQ(with("/api/v1/logs", {{"per_page", "501"}}), 422);
  EXPECT_EQ(with("/api/v1/logs", {{"page", "x"}}), 422);
  EXPECT_EQ(with("/api/v1/logs", {{"order", "sideways"}}), 422);
  EXPECT_EQ(with("/api/v1/logs", {{"from", "yesterday"}}), 422);
  EXPECT_EQ(with("/api/v1/logs/summary", {{"days", "0"}}), 422);
  EXPECT_EQ(with("/api/v1/logs/summary", {{"days", "3661"}}), 422);
  EXPECT_EQ(with("/api/v1/logs/export", {{"from", "2024-01-01T00:00:00Z"}}), 422);
  EXPECT_EQ(with("/api/v1/logs/export", {{"from", "2024-01-01T00:00:00Z"}, {"to", "2024-01-01T00:00:00Z"}}), 422);
}

TEST(Gateway, SummaryCountsTheCurrentSecond) {
  fixture::MatrixStack s;
  s.logs.append(fixture::draft("alice", "bob", "t", "hr", fixture::kEpoch), Effect::Allow);
  auto token = "Bearer " + s.identity.login("alice", "alice-password").access_token;
  auto body = json::parse(s.api.handle(request("GET", "/api/v1/logs/summary", {}, token)).body);
  EXPECT_EQ(body["total"], 2);
}

TEST(Gateway, ExportIsAnAttachment) {
  fixture::MatrixStack s;
  auto token = "Bearer " + s.identity.login("alice", "alice-password").access_token;
  auto r = request("GET", "/api/v1/logs/export", {}, token);
  r.query = {{"from", "2024-05-01T00:00:00Z"}, {"to", "2024-06-01T00:00:00Z"}};
  auto resp = s.api.handle(r);
  EXPECT_EQ(resp.status, 200);
  EXPECT_EQ(resp.content_type, "text/html; charset=utf-8");
  auto disposition = resp.header("Content-Disposition");
  ASSERT_TRUE(disposition);
  EXPECT_NE(disposition->find("attachment; filename=\"usage-report_alice_"), std::string::npos);
}

TEST(Gateway, Cors) {
  fixture::MatrixStack s;
  auto pre = request("OPTIONS", "/api/v1/logs");
  pre.headers["origin"] = "https://dash.example";
  auto r = s.api.handle(pre);
  EXPECT_EQ(r.status, 204);
  EXPECT_EQ(r.header("Access-Control-Allow-Origin"), "https://dash.example");
  auto other = request("GET", "/api/v1/health");
  other.headers["origin"] = "https://evil.example";
  EXPECT_FALSE(s.api.handle(other).header("Access-Control-Allow-Origin"));
}

TEST(Gateway, HealthReportsStoreState) {
  fixture::TempDir dir;
  auto path = dir.file("h.db");
  {
    fixture::Stack s{path};
    auto ok = json::parse(s.api.handle(request("GET", "/api/v1/health")).body);
    EXPECT_EQ(ok["status"], "ok");
    EXPECT_EQ(ok["version"], "test");
  }
  auto ro = storage::Database::open(path, storage::OpenMode::ReadOnly);
  ManualClock clock{fixture::at(fixture::kEpoch)};
  logstore::LogStore logs{std::make_unique<logstore::SqliteLogBackend>(ro), clock};
  policy::PolicyStore policies{ro, clock};
  identity::IdentityService identity{ro, clock, fixture::kSigningKey, identity::PasswordHasher{identity::KdfParams::minimal()}};
  MonitorRegistry monitors;
  Api api{{logs, policies, identity, monitors, clock, {}, "test"}};
  auto r = api.handle(request("GET", "/api/v1/health"));
  EXPECT_EQ(r.status, 503);
  EXPECT_EQ(json::parse(r.body)["store_ok"], false);
}

TEST(Gateway, OpenApiDescribesEveryRoute) {
  auto doc = json::parse(openapi_document());
  EXPECT_EQ(doc["openapi"].get<std::string>().substr(0, 3), "3.1");
  std::size_t operations = 0;
  for (const auto& [path, item] : doc["paths"].items()) {
    for (const auto& [method, op] : item.items()) {
      if (method != "parameters") ++operations;
    }
  }
  EXPECT_EQ(operations, Api::routes().size());
  for (const auto& route : Api::routes()) {
    std::string path = route.pattern.substr(std::string{"/api/v1"}.size());
    std::string method = route.method;
    std::transform(method.begin(), method.end(), method.begin(), ::tolower);
    bool found = doc["paths"].contains(route.pattern) || doc["paths"].contains(path);
    const auto& item = doc["paths"].contains(route.pattern) ? doc["paths"][route.pattern] : doc["paths"][path];
    EXPECT_TRUE(found && item.contains(method)) << route.method << " " << route.pattern;
  }
}

TEST(Monitors, HashedCredentialsRoundTrip) {
  fixture::TempDir dir;
  auto file = dir.path() / "monitors.json";
  MonitorRegistry r;
  r.add("mon", "s3cret");
  EXPECT_THROW(r.add("mon", "other"), std::invalid_argument);
  r.save(file);
  auto loaded = MonitorRegistry::load(file);
  EXPECT_TRUE(loaded.authenticate("mon", "s3cret"));
  EXPECT_FALSE(loaded.authenticate("mon", "s3cret "));
  EXPECT_FALSE(loaded.authenticate("nobody", "s3cret"));
  std::ifstream in{file};
  std::string text{std::istreambuf_iterator<char>{in}, {}};
  EXPECT_EQ(text.find("s3cret"), std::string::npos);
  EXPECT_TRUE(verify_monitor_secret(hash_monitor_secret("a"), "a"));
  EXPECT_FALSE(verify_monitor_secret("sha256$zz$zz", "a"));
}

TEST(Config, SplitList) {
  EXPECT_EQ(split_list(" a, b ,,c "), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(parse_mode("sso"), Mode::Sso);
  EXPECT_FALSE(parse_mode("both"));
}
