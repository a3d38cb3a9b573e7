#include "itt/identity/identity_service.hpp"

#include <algorithm>
#include <set>

#include "itt/core/crypto.hpp"
#include "itt/core/error.hpp"
#include "itt/core/validation.hpp"
#include "itt/storage/database.hpp"

namespace itt::identity {
namespace {

using storage::Connection;

Error auth_failed() { return Error{Errc::authentication_failed, "invalid credentials"}; }

std::optional<UserRecord> load_user(Connection& conn, const std::string& main_id) {
  auto stmt = conn.prepare(
      "SELECT main_id, credential_hash, is_admin, created_at, updated_at FROM users "
      "WHERE main_id = ?");
  stmt.bind(1, main_id);
  if (!stmt.step()) return std::nullopt;
  UserRecord user;
  user.main_id = stmt.text(0);
  user.credential_hash = stmt.text(1);
  user.is_admin = stmt.integer(2) != 0;
  user.created_at = parse_canonical_timestamp(stmt.text(3)).value_or(Timestamp{});
  user.updated_at = parse_canonical_timestamp(stmt.text(4)).value_or(Timestamp{});

  auto ids = conn.prepare(
      "SELECT identifier FROM identifiers WHERE main_id = ? AND is_main = 0 ORDER BY identifier");
  ids.bind(1, main_id);
  while (ids.step()) user.secondary_ids.push_back(ids.text(0));
  return user;
}

std::optional<std::string> owner_of(Connection& conn, const std::string& identifier) {
  auto stmt = conn.prepare("SELECT main_id FROM identifiers WHERE identifier = ?");
  stmt.bind(1, identifier);
  if (!stmt.step()) return std::nullopt;
  return stmt.text(0);
}

std::int64_t admin_count(Connection& conn) {
  auto stmt = conn.prepare("SELECT COUNT(*) FROM users WHERE is_admin = 1");
  stmt.step();
  return stmt.integer(0);
}

void require_admin(Connection& conn, const std::string& actor) {
  auto user = load_user(conn, actor);
  if (!user || !user->is_admin) throw Error{Errc::forbidden, "administrator rights required"};
}

// Trimmed, deduplicated, sorted; rejects empty entries and the main id.
std::vector<std::string> normalize_secondary(const std::vector<std::string>& raw,
                                             const std::string& main_id) {
  std::set<std::string> ids;
  for (const auto& r : raw) {
    std::string id = trim(r);
    if (id.empty()) {
      throw Error{Errc::validation, "secondary identifiers must not be empty", "secondary_ids"};
    }
    if (id == main_id) {
      throw Error{Errc::validation, "main identifier must not be listed as secondary",
                  "secondary_ids"};
    }
    ids.insert(std::move(id));
  }
  return {ids.begin(), ids.end()};
}

// Throws duplicate_identifier naming the first identifier held by a user
// other than `self`.
void require_free(Connection& conn, const std::vector<std::string>& ids, const std::string& self,
                  std::string_view field) {
  for (const auto& id : ids) {
    auto holder = owner_of(conn, id);
    if (holder && *holder != self) {
      throw Error{Errc::duplicate_identifier, "identifier '" + id + "' is already registered",
                  std::string{field}};
    }
  }
}

void insert_identifiers(Connection& conn, const std::string& main_id,
                        const std::vector<std::string>& secondary) {
  auto insert = conn.prepare("INSERT INTO identifiers (identifier, main_id, is_main) VALUES (?, ?, ?)");
  for (const auto& id : secondary) {
    insert.bind(1, id).bind(2, main_id).bind(3, std::int64_t{0}).run();
    insert.reset();
  }
}

void require_strong(const std::string& password, std::string_view field) {
  if (password_length(password) < kMinPasswordLength) {
    throw Error{Errc::weak_password, "password must have at least 8 characters",
                std::string{field}};
  }
}

void revoke_all(Connection& conn, const std::string& principal) {
  auto stmt = conn.prepare("UPDATE sessions SET revoked = 1 WHERE principal = ?");
  stmt.bind(1, principal).run();
}

void insert_session(Connection& conn, const SessionToken& token, const std::string& pair) {
  auto stmt = conn.prepare(
      "INSERT INTO sessions (jti, principal, kind, issued_at, expires_at, pair_jti) "
      "VALUES (?, ?, ?, ?, ?, ?)");
  stmt.bind(1, token.token_id)
      .bind(2, token.principal)
      .bind(3, to_string(token.kind))
      .bind(4, format_timestamp(token.issued_at))
      .bind(5, format_timestamp(token.expires_at))
      .bind(6, pair)
      .run();
}

}  // namespace

IdentityService::IdentityService(std::shared_ptr<storage::Database> db, const Clock& clock,
                                 std::string signing_key, PasswordHasher hasher,
                                 IdentityConfig config)
    : db_(std::move(db)),
      clock_(clock),
      signing_key_(std::move(signing_key)),
      hasher_(hasher),
      config_(config),
      dummy_hash_(hasher_.hash(crypto::uuid_v4())) {
  if (signing_key_.size() < 32) throw std::invalid_argument("signing key shorter than 32 bytes");
  if (config_.access_ttl.count() <= 0 || config_.refresh_ttl.count() <= 0) {
    throw std::invalid_argument("token TTLs must be positive");
  }
}

bool IdentityService::bootstrap_admin(const std::string& main_id, const std::string& password) {
  std::string id = trim(main_id);
  if (id.empty()) throw Error{Errc::validation, "bootstrap admin id is empty", "main_id"};
  require_strong(password, "password");
  if (db_->read([](Connection& conn) { return admin_count(conn); }) > 0) return false;
  std::string hash = hasher_.hash(password);
  return db_->write([&](Connection& conn) {
    if (admin_count(conn) > 0) return false;
    require_free(conn, {id}, "", "main_id");
    auto now = format_timestamp(clock_.now());
    auto insert = conn.prepare(
        "INSERT INTO users (main_id, credential_hash, is_admin, created_at, updated_at) "
        "VALUES (?, ?, 1, ?, ?)");
    insert.bind(1, id).bind(2, hash).bind(3, now).bind(4, now).run();
    auto main = conn.prepare("INSERT INTO identifiers (identifier, main_id, is_main) VALUES (?, ?, 1)");
    main.bind(1, id).bind(2, id).run();
    return true;
  });
}

UserRecord IdentityService::create_user(const std::string& actor, const NewUser& user) {
  std::string main_id = trim(user.main_id);
  if (main_id.empty()) throw Error{Errc::validation, "main_id must not be empty", "main_id"};
  if (main_id == kWildcard) throw Error{Errc::validation, "main_id must not be '*'", "main_id"};
  auto secondary = normalize_secondary(user.secondary_ids, main_id);
  if (std::find(secondary.begin(), secondary.end(), std::string{kWildcard}) != secondary.end()) {
    throw Error{Errc::validation, "identifiers must not be '*'", "secondary_ids"};
  }
  db_->read([&](Connection& conn) { require_admin(conn, actor); });
  require_strong(user.password, "password");
  std::string hash = hasher_.hash(user.password);

  return db_->write([&](Connection& conn) {
    require_admin(conn, actor);
    require_free(conn, {main_id}, "", "main_id");
    require_free(conn, secondary, "", "secondary_ids");
    auto now = format_timestamp(clock_.now());
    auto insert = conn.prepare(
        "INSERT INTO users (main_id, credential_hash, is_admin, created_at, updated_at) "
        "VALUES (?, ?, ?, ?, ?)");
    insert.bind(1, main_id)
        .bind(2, hash)
        .bind(3, std::int64_t{user.is_admin ? 1 : 0})
        .bind(4, now)
        .bind(5, now)
        .run();
    auto main = conn.prepare("INSERT INTO identifiers (identifier, main_id, is_main) VALUES (?, ?, 1)");
    main.bind(1, main_id).bind(2, main_id).run();
    insert_identifiers(conn, main_id, secondary);
    return *load_user(conn, main_id);
  });
}

std::optional<UserRecord> IdentityService::find_user(const std::string& main_id) const {
  return db_->read([&](Connection& conn) { return load_user(conn, main_id); });
}

std::vector<UserRecord> IdentityService::list_users() const {
  return db_->read([](Connection& conn) {
    std::vector<std::string> ids;
    auto stmt = conn.prepare("SELECT main_id FROM users ORDER BY main_id");
    while (stmt.step()) ids.push_back(stmt.text(0));
    std::vector<UserRecord> users;
    for (const auto& id : ids) users.push_back(*load_user(conn, id));
    return users;
  });
}

UserRecord IdentityService::update_user(const std::string& actor, const std::string& target,
                                        const UserChanges& changes) {
  return db_->write([&](Connection& conn) {
    auto actor_record = load_user(conn, actor);
    bool actor_admin = actor_record && actor_record->is_admin;
    if (!actor_admin && (actor != target || changes.is_admin.has_value())) {
      throw Error{Errc::forbidden, "not allowed to modify this user"};
    }
    auto user = load_user(conn, target);
    if (!user) throw Error{Errc::not_found, "no user " + target};

    if (changes.secondary_ids) {
      auto secondary = normalize_secondary(*changes.secondary_ids, target);
      if (std::find(secondary.begin(), secondary.end(), std::string{kWildcard}) != secondary.end()) {
        throw Error{Errc::validation, "identifiers must not be '*'", "secondary_ids"};
      }
      require_free(conn, secondary, target, "secondary_ids");
      auto clear = conn.prepare("DELETE FROM identifiers WHERE main_id = ? AND is_main = 0");
      clear.bind(1, target).run();
      insert_identifiers(conn, target, secondary);
    }
    if (changes.is_admin && *changes.is_admin != user->is_admin) {
      if (!*changes.is_admin && admin_count(conn) <= 1) {
        throw Error{Errc::last_admin, "cannot demote the last administrator"};
      }
      auto set = conn.prepare("UPDATE users SET is_admin = ? WHERE main_id = ?");
      set.bind(1, std::int64_t{*changes.is_admin ? 1 : 0}).bind(2, target).run();
    }
    auto touch = conn.prepare("UPDATE users SET updated_at = ? WHERE main_id = ?");
    touch.bind(1, format_timestamp(clock_.now())).bind(2, target).run();
    return *load_user(conn, target);
  });
}

void IdentityService::change_password(const std::string& actor,
                                      const std::string& current_password,
                                      const std::string& new_password) {
  auto user = find_user(actor);
  if (!user) throw Error{Errc::not_found, "no user " + actor};
  if (!hasher_.verify(user->credential_hash, current_password)) {
    throw Error{Errc::validation, "current password is incorrect", "current_password"};
  }
  require_strong(new_password, "new_password");
  std::string hash = hasher_.hash(new_password);
  db_->write([&](Connection& conn) {
    auto update =
        conn.prepare("UPDATE users SET credential_hash = ?, updated_at = ? WHERE main_id = ? "
                     "AND credential_hash = ?");
    update.bind(1, hash)
        .bind(2, format_timestamp(clock_.now()))
        .bind(3, actor)
        .bind(4, user->credential_hash)
        .run();
    if (conn.changes() != 1) {
      throw Error{Errc::validation, "password changed concurrently; retry", "current_password"};
    }
    revoke_all(conn, actor);
  });
}

void IdentityService::delete_user(const std::string& actor, const std::string& target) {
  db_->write([&](Connection& conn) {
    require_admin(conn, actor);
    auto user = load_user(conn, target);
    if (!user) throw Error{Errc::not_found, "no user " + target};
    if (user->is_admin && admin_count(conn) <= 1) {
      throw Error{Errc::last_admin, "cannot delete the last administrator"};
    }
    revoke_all(conn, target);
    auto del = conn.prepare("DELETE FROM users WHERE main_id = ?");
    del.bind(1, target).run();
  });
}

std::string IdentityService::resolve_identifier(std::string_view any_id) const {
  std::string id = trim(any_id);
  if (id.empty()) throw Error{Errc::validation, "identifier must not be empty", "identifier"};
  auto owner = db_->read([&](Connection& conn) { return owner_of(conn, id); });
  if (!owner) throw Error{Errc::unknown_identifier, "unknown identifier '" + id + "'", "identifier"};
  return *owner;
}

TokenPair IdentityService::login(const std::string& identifier, const std::string& password) {
  std::string id = trim(identifier);
  auto user = db_->read([&](Connection& conn) -> std::optional<UserRecord> {
    auto owner = owner_of(conn, id);
    return owner ? load_user(conn, *owner) : std::nullopt;
  });
  if (!user) {
    // Same work as a real check, so timing does not reveal unknown users.
    hasher_.verify(dummy_hash_, password);
    throw auth_failed();
  }
  if (!hasher_.verify(user->credential_hash, password)) throw auth_failed();
  return issue_pair(user->main_id);
}

TokenPair IdentityService::issue_pair(const std::string& principal) {
  auto now = clock_.now();
  TokenPair pair;
  pair.access = SessionToken{crypto::uuid_v4(), principal, now, now + config_.access_ttl,
                             TokenKind::Access, false};
  pair.refresh = SessionToken{crypto::uuid_v4(), principal, now, now + config_.refresh_ttl,
                              TokenKind::Refresh, false};
  auto sign = [&](const SessionToken& t) {
    return sign_token({t.token_id, t.principal, t.kind, t.issued_at, t.expires_at}, signing_key_);
  };
  pair.access_token = sign(pair.access);
  pair.refresh_token = sign(pair.refresh);
  db_->write([&](Connection& conn) {
    insert_session(conn, pair.access, pair.refresh.token_id);
    insert_session(conn, pair.refresh, pair.access.token_id);
  });
  return pair;
}

TokenClaims IdentityService::verify_token(std::string_view raw) const {
  TokenClaims claims = parse_signed_token(raw, signing_key_);
  if (!(clock_.now() < claims.expires_at)) throw Error{Errc::token_expired, "token has expired"};
  bool live = db_->read([&](Connection& conn) {
    auto stmt = conn.prepare("SELECT principal, kind, revoked FROM sessions WHERE jti = ?");
    stmt.bind(1, claims.token_id);
    return stmt.step() && stmt.text(0) == claims.principal &&
           stmt.text(1) == to_string(claims.kind) && stmt.integer(2) == 0;
  });
  if (!live) throw Error{Errc::token_revoked, "token has been revoked"};
  return claims;
}

void IdentityService::logout(std::string_view raw_access_token) {
  TokenClaims claims = verify_token(raw_access_token);
  if (claims.kind != TokenKind::Access) {
    throw Error{Errc::token_wrong_kind, "logout requires an access token"};
  }
  db_->write([&](Connection& conn) {
    auto stmt = conn.prepare(
        "UPDATE sessions SET revoked = 1 WHERE jti = ?1 OR jti = "
        "(SELECT pair_jti FROM sessions WHERE jti = ?1)");
    stmt.bind(1, claims.token_id).run();
  });
}

TokenPair IdentityService::refresh(std::string_view raw_refresh_token) {
  TokenClaims claims = verify_token(raw_refresh_token);
  if (claims.kind != TokenKind::Refresh) {
    throw Error{Errc::token_wrong_kind, "refresh requires a refresh token"};
  }
  db_->write([&](Connection& conn) {
    // Only one rotation may win for a given refresh token.
    auto take = conn.prepare("UPDATE sessions SET revoked = 1 WHERE jti = ? AND revoked = 0");
    take.bind(1, claims.token_id).run();
    if (conn.changes() != 1) throw Error{Errc::token_revoked, "token has been revoked"};
    auto pair = conn.prepare(
        "UPDATE sessions SET revoked = 1 WHERE jti = (SELECT pair_jti FROM sessions WHERE jti = ?)");
    pair.bind(1, claims.token_id).run();
    if (!load_user(conn, claims.principal)) {
      throw Error{Errc::token_revoked, "token principal no longer exists"};
    }
  });
  return issue_pair(claims.principal);
}

bool IdentityService::is_admin(const std::string& main_id) const {
  auto user = find_user(main_id);
  return user && user->is_admin;
}

bool IdentityService::healthy() const noexcept {
  try {
    db_->read([](Connection& conn) {
      auto stmt = conn.prepare("SELECT COUNT(*) FROM users");
      stmt.step();
    });
    return !signing_key_.empty();
  } catch (...) {
    return false;
  }
}

}  // namespace itt::identity
