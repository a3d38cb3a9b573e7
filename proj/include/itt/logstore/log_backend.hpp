#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "itt/core/canonical.hpp"
#include "itt/core/model.hpp"

namespace itt::storage {
class Database;
}

namespace itt::logstore {

struct ChainState {
  std::int64_t head_seq = 0;
  Digest head_hash{};  // genesis: all zero
};

enum class SortOrder { OccurredDesc, OccurredAsc };

std::string_view to_string(SortOrder order) noexcept;
std::optional<SortOrder> parse_sort_order(std::string_view text) noexcept;

inline constexpr std::int64_t kMaxPerPage = 500;

struct LogQuery {
  std::string owner;
  std::optional<Timestamp> from;  // occurred_at >= from
  std::optional<Timestamp> to;    // occurred_at < to
  std::optional<std::string> consumer;
  std::optional<std::string> tool;
  std::optional<std::string> data_category;
  std::int64_t page = 1;
  std::int64_t per_page = 50;
  SortOrder order = SortOrder::OccurredDesc;
};

struct LogPage {
  std::vector<UsageLogEntry> entries;
  std::int64_t total_count = 0;
  std::int64_t page = 1;
  std::int64_t per_page = 50;
};

// An entry exactly as persisted, as text, for chain verification.
struct StoredRow {
  std::int64_t seq = 0;
  CanonicalFields fields;
  std::string chain_hash;
};

using EntryBuilder = std::function<UsageLogEntry(const ChainState&)>;

// Data-access interface for the usage log. Implementations must make
// append atomic: the builder sees the current head, and the entry plus the
// advanced head are persisted together or not at all.
class LogBackend {
 public:
  virtual ~LogBackend() = default;

  virtual ChainState head() const = 0;
  virtual UsageLogEntry append(const EntryBuilder& build) = 0;
  /// `query` is already validated.
  virtual LogPage query(const LogQuery& query) const = 0;
  /// Owner's entries with occurred_at in [from, to), ascending by (occurred_at, seq).
  virtual std::vector<UsageLogEntry> owner_entries(const std::string& owner, Timestamp from,
                                                   Timestamp to) const = 0;
  /// Visits rows in seq order until `visit` returns false; returns the head
  /// from the same snapshot.
  virtual ChainState scan(const std::function<bool(const StoredRow&)>& visit) const = 0;
  virtual bool healthy() noexcept = 0;
};

class SqliteLogBackend final : public LogBackend {
 public:
  explicit SqliteLogBackend(std::shared_ptr<storage::Database> db);

  ChainState head() const override;
  UsageLogEntry append(const EntryBuilder& build) override;
  LogPage query(const LogQuery& query) const override;
  std::vector<UsageLogEntry> owner_entries(const std::string& owner, Timestamp from,
                                           Timestamp to) const override;
  ChainState scan(const std::function<bool(const StoredRow&)>& visit) const override;
  bool healthy() noexcept override;

 private:
  std::shared_ptr<storage::Database> db_;
};

class MemoryLogBackend final : public LogBackend {
 public:
  ChainState head() const override;
  UsageLogEntry append(const EntryBuilder& build) override;
  LogPage query(const LogQuery& query) const override;
  std::vector<UsageLogEntry> owner_entries(const std::string& owner, Timestamp from,
                                           Timestamp to) const override;
  ChainState scan(const std::function<bool(const StoredRow&)>& visit) const override;
  bool healthy() noexcept override { return true; }

  /// Out-of-band access for tamper tests.
  void tamper(std::int64_t seq, const std::function<void(UsageLogEntry&)>& mutate);

 private:
  mutable std::shared_mutex mutex_;
  std::vector<UsageLogEntry> entries_;
  ChainState head_;
};

}  // namespace itt::logstore
