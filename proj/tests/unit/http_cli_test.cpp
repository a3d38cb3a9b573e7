#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "itt/client/api_client.hpp"
#include "itt/client/cli.hpp"
#include "itt/gateway/deployment.hpp"

using namespace itt;
using namespace itt::client;
using namespace itt::gateway;

namespace {

class Served : public ::testing::Test {
 protected:
  void SetUp() override {
    MonitorRegistry monitors;
    monitors.add("mon", "mon-secret");
    monitors.save(dir_.path() / "monitors.json");
    GatewayConfig config;
    config.mode = Mode::All;
    config.host = "127.0.0.1";
    config.log_port = 0;
    config.db_path = dir_.file("itt.db");
    config.bootstrap_admin_id = "admin";
    config.bootstrap_admin_password = "admin-password";
    config.monitor_credentials_file = (dir_.path() / "monitors.json").string();
    DeploymentOptions options;
    options.kdf = identity::KdfParams::minimal();
    options.secrets = std::make_unique<identity::MemorySecretProvider>();
    deployment_ = std::make_unique<Deployment>(config, std::move(options));
    ASSERT_TRUE(deployment_->bind());
    deployment_->start();
    endpoint_ = "http://127.0.0.1:" + std::to_string(deployment_->log_port());
  }

  void TearDown() override {
    deployment_->stop();
    deployment_.reset();
  }

  struct Run {
    int code;
    std::string out;
    std::string err;
  };

  Run cli(std::vector<std::string> args, const std::string& secret = {}) {
    std::istringstream in;
    std::ostringstream out, err;
    args.insert(args.begin(), {"--endpoint", endpoint_});
    int code = run_cli(args, CliIo{in, out, err, [secret](const std::string&) { return secret; }});
    return {code, out.str(), err.str()};
  }

  std::string admin_token() {
    auto r = cli({"auth", "login", "--identifier", "admin"}, "admin-password");
    EXPECT_EQ(r.code, 0) << r.err;
    return nlohmann::json::parse(r.out)["access_token"];
  }

  fixture::TempDir dir_;
  std::unique_ptr<Deployment> deployment_;
  std::string endpoint_;
};

}  // namespace

TEST_F(Served, HealthOverSocket) {
  ApiClient client{endpoint_, {}};
  auto r = client.get("/api/v1/health");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.json()["version"], std::string{build_version()});
  auto missing = client.get("/api/v1/nope");
  EXPECT_EQ(missing.status, 404);
  EXPECT_EQ(exit_code_for(missing), kValidation);
}

TEST_F(Served, PathSegmentsAreEncoded) {
  EXPECT_EQ(encode_path_segment("a b/c%"), "a%20b%2Fc%25");
  std::string token = admin_token();
  auto create = cli({"--token", token, "user", "create", "--main-id", "odd id/x"}, "odd-password");
  ASSERT_EQ(create.code, 0) << create.err;
  ApiClient client{endpoint_, {"" + token, std::nullopt}};
  auto r = client.get("/api/v1/users/" + encode_path_segment("odd id/x"));
  EXPECT_EQ(r.status, 200) << r.body;
}

TEST_F(Served, CliRoundTrip) {
  std::string token = admin_token();
  auto create = cli({"--token", token, "user", "create", "--main-id", "alice", "--secondary", "A-17"},
                    "alice-password");
  ASSERT_EQ(create.code, 0) << create.err;
  EXPECT_EQ(create.out.find("alice-password"), std::string::npos);

  auto emit = cli({"--basic-id", "mon", "--basic-secret", "mon-secret", "log", "emit", "--owner",
                   "A-17", "--consumer", "admin", "--tool", "sheet", "--category", "hr"});
  ASSERT_EQ(emit.code, 0) << emit.err;
  EXPECT_NE(emit.out.find("seq=1 "), std::string::npos);

  auto login = cli({"auth", "login", "--identifier", "A-17"}, "alice-password");
  ASSERT_EQ(login.code, 0);
  std::string alice = nlohmann::json::parse(login.out)["access_token"];
  auto summary = cli({"--token", alice, "query", "summary"});
  ASSERT_EQ(summary.code, 0) << summary.err;
  auto s = nlohmann::json::parse(summary.out);
  EXPECT_EQ(s["total"], 1);
  EXPECT_EQ(s["by_tool"]["sheet"], 1);

  auto logs = cli({"--token", alice, "query", "logs", "--consumer", "admin"});
  ASSERT_EQ(logs.code, 0);
  ApiClient direct{endpoint_, {alice, std::nullopt}};
  EXPECT_EQ(nlohmann::json::parse(logs.out),
            direct.get("/api/v1/logs", {{"consumer", "admin"}}).json());

  auto out_file = dir_.file("report.html");
  auto exported = cli({"--token", alice, "query", "export", "--from", "2000-01-01T00:00:00Z", "--to",
                       "2100-01-01T00:00:00Z", "--out", out_file});
  ASSERT_EQ(exported.code, 0) << exported.err;
  std::ifstream report{out_file};
  std::string html{std::istreambuf_iterator<char>{report}, {}};
  EXPECT_NE(html.find("<html"), std::string::npos);

  auto set = cli({"--token", alice, "policy", "set", "--subject", "admin", "--category", "hr",
                  "--effect", "deny"});
  ASSERT_EQ(set.code, 0) << set.err;
  auto evaluated = cli({"--basic-id", "mon", "--basic-secret", "mon-secret", "policy", "evaluate",
                        "--owner", "alice", "--consumer", "admin", "--category", "hr"});
  ASSERT_EQ(evaluated.code, 0);
  EXPECT_EQ(nlohmann::json::parse(evaluated.out)["effect"], "deny");
  std::string id = nlohmann::json::parse(set.out)["policy_id"];
  EXPECT_EQ(cli({"--token", alice, "policy", "delete", id}).code, 0);
  EXPECT_EQ(cli({"--token", alice, "policy", "delete", id}).code, kValidation);

  EXPECT_EQ(cli({"--token", alice, "verify-chain"}).code, kAuth);
  EXPECT_EQ(cli({"--token", token, "verify-chain"}).code, kOk);

  EXPECT_EQ(cli({"--token", alice, "auth", "logout"}).code, 0);
  EXPECT_EQ(cli({"--token", alice, "query", "summary"}).code, kAuth);
}

TEST_F(Served, CliImport) {
  std::string token = admin_token();
  auto file = dir_.file("entries.ndjson");
  {
    std::ofstream out{file};
    out << R"({"owner":"admin","consumer":"admin","tool":"t","data_category":"x","occurred_at":"2020-01-01T00:00:00Z"})"
        << "\n"
        << R"({"owner":"admin","consumer":"","tool":"t","data_category":"x","occurred_at":"2020-01-01T00:00:00Z"})"
        << "\n\n"
        << R"({"owner":"admin","consumer":"admin","tool":"t","data_category":"y","occurred_at":"2020-01-02T00:00:00Z"})"
        << "\n";
  }
  auto basic = std::vector<std::string>{"--basic-id", "mon", "--basic-secret", "mon-secret"};
  auto args = basic;
  args.insert(args.end(), {"log", "import", file});
  auto strict = cli(args);
  EXPECT_EQ(strict.code, kValidation);
  EXPECT_NE(strict.out.find("imported=1 failed=1"), std::string::npos);
  args.push_back("--continue-on-error");
  auto lenient = cli(args);
  EXPECT_EQ(lenient.code, kValidation);
  EXPECT_NE(lenient.out.find("imported=2 failed=1"), std::string::npos);
}

TEST_F(Served, CliExitCodes) {
  auto missing = cli({"log", "emit", "--owner", "admin"});
  EXPECT_EQ(missing.code, kValidation);
  auto bad_secret = cli({"--basic-id", "mon", "--basic-secret", "wrong", "log", "emit", "--owner",
                         "admin", "--consumer", "admin", "--tool", "t", "--category", "x"});
  EXPECT_EQ(bad_secret.code, kAuth);
  auto unknown = cli({"--basic-id", "mon", "--basic-secret", "mon-secret", "log", "emit", "--owner",
                      "ghost", "--consumer", "admin", "--tool", "t", "--category", "x"});
  EXPECT_EQ(unknown.code, kValidation);
  EXPECT_EQ(cli({"auth", "login", "--identifier", "admin"}, "wrong-password").code, kAuth);
  EXPECT_EQ(cli({"query", "summary"}).code, kAuth);
  EXPECT_EQ(cli({"bogus"}).code, kValidation);

  std::istringstream in;
  std::ostringstream out, err;
  int code = run_cli({"--endpoint", "http://127.0.0.1:1", "--token", "x", "query", "summary"},
                     CliIo{in, out, err, {}});
  EXPECT_EQ(code, kNetwork);
}

TEST_F(Served, VerboseLogRedactsCredentials) {
  std::ostringstream log;
  ApiClient client{endpoint_, {std::string{"secret-token-value"}, std::nullopt}, &log};
  client.get("/api/v1/logs");
  ApiClient basic{endpoint_, {std::nullopt, std::pair{std::string{"mon"}, std::string{"mon-secret"}}}, &log};
  basic.post("/api/v1/logs", nlohmann::json::object());
  EXPECT_FALSE(log.str().empty());
  EXPECT_EQ(log.str().find("secret-token-value"), std::string::npos);
  EXPECT_EQ(log.str().find("mon-secret"), std::string::npos);
}
