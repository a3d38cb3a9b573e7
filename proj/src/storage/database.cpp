#include "itt/storage/database.hpp"

#include <sqlite3.h>

#include "itt/core/error.hpp"

namespace itt::storage {
namespace {

[[noreturn]] void fail(sqlite3* db, std::string_view what) {
  std::string message{what};
  if (db != nullptr) {
    message += ": ";
    message += sqlite3_errmsg(db);
  }
  throw Error{Errc::storage, message};
}

// Forward-only; index i upgrades the schema from version i to i + 1.
constexpr std::string_view kMigrations[] = {
    R"sql(
      CREATE TABLE entries (
        seq INTEGER PRIMARY KEY,
        entry_id TEXT NOT NULL UNIQUE,
        occurred_at TEXT NOT NULL,
        recorded_at TEXT NOT NULL,
        owner TEXT NOT NULL,
        consumer TEXT NOT NULL,
        tool TEXT NOT NULL,
        data_category TEXT NOT NULL,
        purpose TEXT NOT NULL,
        access_kind TEXT NOT NULL,
        policy_flag TEXT NOT NULL,
        chain_hash TEXT NOT NULL
      );
      CREATE INDEX entries_owner_time ON entries(owner, occurred_at, seq);
      CREATE TABLE chain_head (
        id INTEGER PRIMARY KEY CHECK (id = 1),
        head_seq INTEGER NOT NULL,
        head_hash TEXT NOT NULL
      );
      INSERT INTO chain_head VALUES (1, 0, '0000000000000000000000000000000000000000000000000000000000000000');
    )sql",
    R"sql(
      CREATE TABLE policies (
        ordinal INTEGER PRIMARY KEY AUTOINCREMENT,
        policy_id TEXT NOT NULL UNIQUE,
        owner TEXT NOT NULL,
        subject TEXT NOT NULL,
        data_category TEXT NOT NULL,
        effect TEXT NOT NULL,
        created_at TEXT NOT NULL,
        UNIQUE (owner, subject, data_category)
      );
    )sql",
    R"sql(
      CREATE TABLE users (
        main_id TEXT PRIMARY KEY,
        credential_hash TEXT NOT NULL,
        is_admin INTEGER NOT NULL,
        created_at TEXT NOT NULL,
        updated_at TEXT NOT NULL
      );
      CREATE TABLE identifiers (
        identifier TEXT PRIMARY KEY,
        main_id TEXT NOT NULL REFERENCES users(main_id) ON DELETE CASCADE,
        is_main INTEGER NOT NULL
      );
      CREATE INDEX identifiers_main ON identifiers(main_id);
      CREATE TABLE sessions (
        jti TEXT PRIMARY KEY,
        principal TEXT NOT NULL,
        kind TEXT NOT NULL,
        issued_at TEXT NOT NULL,
        expires_at TEXT NOT NULL,
        pair_jti TEXT NOT NULL,
        revoked INTEGER NOT NULL DEFAULT 0
      );
      CREATE INDEX sessions_principal ON sessions(principal);
      CREATE TABLE health_probe (id INTEGER PRIMARY KEY);
    )sql",
};
static_assert(std::size(kMigrations) == Database::kSchemaVersion);

}  // namespace

Statement::Statement(sqlite3* db, std::string_view sql) : db_(db) {
  if (sqlite3_prepare_v2(db, sql.data(), static_cast<int>(sql.size()), &stmt_, nullptr) !=
      SQLITE_OK) {
    fail(db, "prepare failed");
  }
}

Statement::~Statement() { sqlite3_finalize(stmt_); }

Statement::Statement(Statement&& other) noexcept : db_(other.db_), stmt_(other.stmt_) {
  other.stmt_ = nullptr;
}

Statement& Statement::bind(int index, std::string_view value) {
  if (sqlite3_bind_text(stmt_, index, value.data(), static_cast<int>(value.size()),
                        SQLITE_TRANSIENT) != SQLITE_OK) {
    fail(db_, "bind failed");
  }
  return *this;
}

Statement& Statement::bind(int index, std::int64_t value) {
  if (sqlite3_bind_int64(stmt_, index, value) != SQLITE_OK) fail(db_, "bind failed");
  return *this;
}

Statement& Statement::bind_null(int index) {
  if (sqlite3_bind_null(stmt_, index) != SQLITE_OK) fail(db_, "bind failed");
  return *this;
}

bool Statement::step() {
  int rc = sqlite3_step(stmt_);
  if (rc == SQLITE_ROW) return true;
  if (rc == SQLITE_DONE) return false;
  fail(db_, "step failed");
}

void Statement::run() {
  if (step()) throw Error{Errc::storage, "statement unexpectedly returned rows"};
}

void Statement::reset() {
  sqlite3_reset(stmt_);
  sqlite3_clear_bindings(stmt_);
}

std::string Statement::text(int column) const {
  const auto* data = sqlite3_column_text(stmt_, column);
  int size = sqlite3_column_bytes(stmt_, column);
  return data == nullptr ? std::string{} : std::string(reinterpret_cast<const char*>(data), size);
}

std::int64_t Statement::integer(int column) const { return sqlite3_column_int64(stmt_, column); }

bool Statement::is_null(int column) const {
  return sqlite3_column_type(stmt_, column) == SQLITE_NULL;
}

Connection::Connection(const std::string& path, bool read_only) {
  int flags = SQLITE_OPEN_NOMUTEX |
              (read_only ? SQLITE_OPEN_READONLY : SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE);
  if (sqlite3_open_v2(path.c_str(), &db_, flags, nullptr) != SQLITE_OK) {
    std::string message = "cannot open database " + path + ": " + sqlite3_errmsg(db_);
    sqlite3_close(db_);
    throw Error{Errc::storage, message};
  }
  sqlite3_busy_timeout(db_, 5000);
  exec("PRAGMA foreign_keys = ON");
}

Connection::~Connection() { sqlite3_close(db_); }

void Connection::exec(std::string_view sql) {
  std::string owned{sql};
  char* err = nullptr;
  if (sqlite3_exec(db_, owned.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
    std::string message = err != nullptr ? err : "exec failed";
    sqlite3_free(err);
    throw Error{Errc::storage, message};
  }
}

std::int64_t Connection::changes() const { return sqlite3_changes(db_); }

Database::TransactionGuard::TransactionGuard(Connection& conn, std::string_view begin)
    : conn_(conn) {
  conn_.exec(begin);
}

Database::TransactionGuard::~TransactionGuard() {
  if (!done_) {
    try {
      conn_.exec("ROLLBACK");
    } catch (...) {
    }
  }
}

void Database::TransactionGuard::commit() {
  conn_.exec("COMMIT");
  done_ = true;
}

Database::Lease::Lease(const Database& db, std::unique_ptr<Connection> owned)
    : db_(db), owned_(std::move(owned)) {
  if (!owned_) shared_lock_ = std::unique_lock{db_.writer_mutex_};
}

Database::Lease::~Lease() {
  if (owned_) {
    std::lock_guard lock{db_.pool_mutex_};
    db_.pool_.push_back(std::move(owned_));
  }
}

Connection& Database::Lease::connection() { return owned_ ? *owned_ : *db_.writer_; }

Database::Database(std::string path, OpenMode mode)
    : path_(std::move(path)),
      mode_(mode),
      in_memory_(path_ == ":memory:"),
      writer_(std::make_unique<Connection>(path_, mode == OpenMode::ReadOnly)) {
  if (!in_memory_ && mode_ == OpenMode::ReadWrite) {
    writer_->exec("PRAGMA journal_mode = WAL");
    writer_->exec("PRAGMA synchronous = NORMAL");
  }
}

std::shared_ptr<Database> Database::open(const std::string& path, OpenMode mode) {
  std::shared_ptr<Database> db{new Database(path, mode)};
  if (mode == OpenMode::ReadWrite) db->migrate();
  return db;
}

void Database::migrate() {
  std::lock_guard lock{writer_mutex_};
  TransactionGuard txn{*writer_, "BEGIN IMMEDIATE"};
  auto stmt = writer_->prepare("PRAGMA user_version");
  stmt.step();
  auto version = static_cast<int>(stmt.integer(0));
  if (version > kSchemaVersion) {
    throw Error{Errc::storage, "database schema version " + std::to_string(version) +
                                   " is newer than supported " +
                                   std::to_string(kSchemaVersion)};
  }
  for (int v = version; v < kSchemaVersion; ++v) writer_->exec(kMigrations[v]);
  writer_->exec("PRAGMA user_version = " + std::to_string(kSchemaVersion));
  txn.commit();
}

int Database::schema_version() const {
  return read([](Connection& conn) {
    auto stmt = conn.prepare("PRAGMA user_version");
    stmt.step();
    return static_cast<int>(stmt.integer(0));
  });
}

bool Database::probe_writable() noexcept {
  try {
    std::lock_guard lock{writer_mutex_};
    TransactionGuard txn{*writer_, "BEGIN IMMEDIATE"};
    writer_->exec("INSERT INTO health_probe DEFAULT VALUES");
    // Guard destructor rolls back; the probe leaves no trace.
    return true;
  } catch (...) {
    return false;
  }
}

Database::Lease Database::acquire_reader() const {
  if (in_memory_) return Lease{*this, nullptr};
  {
    std::lock_guard lock{pool_mutex_};
    if (!pool_.empty()) {
      auto conn = std::move(pool_.back());
      pool_.pop_back();
      return Lease{*this, std::move(conn)};
    }
  }
  return Lease{*this, std::make_unique<Connection>(path_, true)};
}

}  // namespace itt::storage
