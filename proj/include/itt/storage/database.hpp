#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

struct sqlite3;
struct sqlite3_stmt;

namespace itt::storage {

class Statement {
 public:
  Statement(sqlite3* db, std::string_view sql);
  ~Statement();
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;
  Statement(Statement&& other) noexcept;
  Statement& operator=(Statement&&) = delete;

  // Parameters are 1-based, as in SQLite.
  Statement& bind(int index, std::string_view value);
  Statement& bind(int index, std::int64_t value);
  Statement& bind_null(int index);

  /// Advances; true while a row is available.
  bool step();
  void run();  // step() that expects completion
  void reset();

  std::string text(int column) const;
  std::int64_t integer(int column) const;
  bool is_null(int column) const;

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

class Connection {
 public:
  Connection(const std::string& path, bool read_only);
  ~Connection();
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;

  void exec(std::string_view sql);
  Statement prepare(std::string_view sql) { return Statement{db_, sql}; }
  std::int64_t changes() const;

 private:
  sqlite3* db_ = nullptr;
};

enum class OpenMode { ReadWrite, ReadOnly };

// A SQLite file (or ":memory:") shared by every store. Writes are serialized
// through one connection inside BEGIN IMMEDIATE; reads run on pooled
// connections inside a deferred transaction and see a consistent snapshot.
class Database {
 public:
  static constexpr int kSchemaVersion = 3;

  static std::shared_ptr<Database> open(const std::string& path,
                                        OpenMode mode = OpenMode::ReadWrite);

  Database(const Database&) = delete;
  Database& operator=(const Database&) = delete;

  template <class Fn>
  auto write(Fn&& fn) {
    std::lock_guard lock{writer_mutex_};
    TransactionGuard txn{*writer_, "BEGIN IMMEDIATE"};
    if constexpr (std::is_void_v<decltype(fn(*writer_))>) {
      fn(*writer_);
      txn.commit();
    } else {
      auto result = fn(*writer_);
      txn.commit();
      return result;
    }
  }

  template <class Fn>
  auto read(Fn&& fn) const {
    Lease lease = acquire_reader();
    TransactionGuard txn{lease.connection(), "BEGIN"};
    if constexpr (std::is_void_v<decltype(fn(lease.connection()))>) {
      fn(lease.connection());
      txn.commit();
    } else {
      auto result = fn(lease.connection());
      txn.commit();
      return result;
    }
  }

  int schema_version() const;
  const std::string& path() const { return path_; }
  bool read_only() const { return mode_ == OpenMode::ReadOnly; }

  /// True when a write transaction can be started and a row written.
  bool probe_writable() noexcept;

 private:
  class TransactionGuard {
   public:
    TransactionGuard(Connection& conn, std::string_view begin);
    ~TransactionGuard();
    void commit();

   private:
    Connection& conn_;
    bool done_ = false;
  };

  class Lease {
   public:
    Lease(const Database& db, std::unique_ptr<Connection> owned);
    ~Lease();
    Lease(const Lease&) = delete;
    Lease& operator=(const Lease&) = delete;
    Connection& connection();

   private:
    const Database& db_;
    std::unique_ptr<Connection> owned_;
    std::unique_lock<std::recursive_mutex> shared_lock_;
  };

  Database(std::string path, OpenMode mode);
  void migrate();
  Lease acquire_reader() const;

  std::string path_;
  OpenMode mode_;
  bool in_memory_;
  std::unique_ptr<Connection> writer_;
  mutable std::recursive_mutex writer_mutex_;
  mutable std::mutex pool_mutex_;
  mutable std::vector<std::unique_ptr<Connection>> pool_;
};

}  // namespace itt::storage
