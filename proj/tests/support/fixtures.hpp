#pragma once

#include <filesystem>
#include <memory>
#include <random>
#include <string>

#include "itt/core/crypto.hpp"
#include "itt/core/time.hpp"
#include "itt/gateway/api.hpp"
#include "itt/identity/identity_service.hpp"
#include "itt/logstore/log_store.hpp"
#include "itt/policy/policy_store.hpp"
#include "itt/storage/database.hpp"

namespace fixture {

inline itt::Timestamp at(long long seconds) { return itt::Timestamp{std::chrono::seconds{seconds}}; }

// 2024-06-01T00:00:00Z
inline constexpr long long kEpoch = 1717200000;

inline constexpr const char* kSigningKey = "fixture-signing-key-000000000000";
inline constexpr const char* kMonitorId = "monitor";
inline constexpr const char* kMonitorSecret = "monitor-secret";

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() / ("itt-test-" + itt::crypto::uuid_v4());
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

// Every store over one database, with a manual clock and a cheap KDF.
struct Stack {
  explicit Stack(const std::string& db_path = ":memory:", long long start = kEpoch)
      : clock(at(start)),
        db(itt::storage::Database::open(db_path)),
        logs(std::make_unique<itt::logstore::SqliteLogBackend>(db), clock),
        policies(db, clock),
        identity(db, clock, kSigningKey,
                 itt::identity::PasswordHasher{itt::identity::KdfParams::minimal()}),
        monitors(make_monitors()),
        api(itt::gateway::ApiContext{logs, policies, identity, monitors, clock,
                                     {"https://dash.example"}, "test"}) {}

  static itt::gateway::MonitorRegistry make_monitors() {
    itt::gateway::MonitorRegistry registry;
    registry.add(kMonitorId, kMonitorSecret);
    return registry;
  }

  itt::ManualClock clock;
  std::shared_ptr<itt::storage::Database> db;
  itt::logstore::LogStore logs;
  itt::policy::PolicyStore policies;
  itt::identity::IdentityService identity;
  itt::gateway::MonitorRegistry monitors;
  itt::gateway::Api api;
};

inline std::string basic_header(const std::string& id, const std::string& secret) {
  return "Basic " + itt::crypto::base64_encode(id + ":" + secret);
}

inline itt::gateway::ApiRequest request(std::string method, std::string path,
                                        std::string body = {},
                                        std::optional<std::string> authorization = {}) {
  itt::gateway::ApiRequest r;
  r.method = std::move(method);
  r.path = std::move(path);
  r.body = std::move(body);
  if (authorization) r.headers["authorization"] = *authorization;
  return r;
}

inline itt::LogDraft draft(const std::string& owner, const std::string& consumer,
                           const std::string& tool, const std::string& category,
                           long long occurred) {
  itt::LogDraft d;
  d.occurred_at = at(occurred);
  d.owner = owner;
  d.consumer = consumer;
  d.tool = tool;
  d.data_category = category;
  d.purpose = "fixture";
  return d;
}

/// `count` random drafts over `owners` owners within [kEpoch - span, kEpoch).
inline std::vector<itt::LogDraft> random_drafts(std::mt19937_64& rng, int count, int owners,
                                                long long span = 30LL * 86400) {
  std::uniform_int_distribution<int> owner(0, owners - 1), small(0, 4), kind(0, 3);
  std::uniform_int_distribution<long long> offset(1, span);
  std::vector<itt::LogDraft> out;
  for (int i = 0; i < count; ++i) {
    auto d = draft("owner" + std::to_string(owner(rng)), "consumer" + std::to_string(small(rng)),
                   "tool" + std::to_string(small(rng)), "category" + std::to_string(small(rng)),
                   kEpoch - offset(rng));
    d.access_kind = static_cast<itt::AccessKind>(kind(rng));
    out.push_back(d);
  }
  return out;
}

}  // namespace fixture
