#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "itt/core/model.hpp"
#include "itt/core/time.hpp"
#include "itt/identity/jwt.hpp"
#include "itt/identity/password.hpp"

namespace itt::storage {
class Database;
}

namespace itt::identity {

struct IdentityConfig {
  std::chrono::seconds access_ttl{30 * 60};
  std::chrono::seconds refresh_ttl{7 * 24 * 60 * 60};
};

struct TokenPair {
  SessionToken access;
  SessionToken refresh;
  std::string access_token;   // compact JWS
  std::string refresh_token;  // compact JWS
};

struct NewUser {
  std::string main_id;
  std::vector<std::string> secondary_ids;
  std::string password;
  bool is_admin = false;
};

// Passwords are deliberately not representable here.
struct UserChanges {
  std::optional<std::vector<std::string>> secondary_ids;
  std::optional<bool> is_admin;
};

// User registry, identifier attribution, and tracked sessions. Every token
// issued is recorded by jti; a token verifies only while its session is live.
class IdentityService {
 public:
  IdentityService(std::shared_ptr<storage::Database> db, const Clock& clock,
                  std::string signing_key, PasswordHasher hasher = PasswordHasher{},
                  IdentityConfig config = {});

  /// Creates the first admin when no admin exists yet; otherwise a no-op.
  /// Returns true when a user was created.
  bool bootstrap_admin(const std::string& main_id, const std::string& password);

  UserRecord create_user(const std::string& actor, const NewUser& user);
  std::optional<UserRecord> find_user(const std::string& main_id) const;
  std::vector<UserRecord> list_users() const;
  UserRecord update_user(const std::string& actor, const std::string& target,
                         const UserChanges& changes);
  void change_password(const std::string& actor, const std::string& current_password,
                       const std::string& new_password);
  void delete_user(const std::string& actor, const std::string& target);

  /// Main identifier owning `any_id`; throws Error{unknown_identifier}.
  std::string resolve_identifier(std::string_view any_id) const;

  /// One indistinguishable Error{authentication_failed} for every failure.
  TokenPair login(const std::string& identifier, const std::string& password);

  /// Error codes: token_malformed, token_bad_signature, token_expired,
  /// token_revoked (also for unknown jti).
  TokenClaims verify_token(std::string_view raw) const;

  void logout(std::string_view raw_access_token);
  TokenPair refresh(std::string_view raw_refresh_token);

  bool is_admin(const std::string& main_id) const;
  bool healthy() const noexcept;
  const IdentityConfig& config() const noexcept { return config_; }

 private:
  TokenPair issue_pair(const std::string& principal);

  std::shared_ptr<storage::Database> db_;
  const Clock& clock_;
  std::string signing_key_;
  PasswordHasher hasher_;
  IdentityConfig config_;
  std::string dummy_hash_;
};

}  // namespace itt::identity
