#pragma once

#include <memory>
#include <mutex>
#include <string>

#include "itt/core/model.hpp"
#include "itt/core/time.hpp"
#include "itt/logstore/log_backend.hpp"

namespace itt::logstore {

struct VerifyResult {
  bool ok = true;
  std::int64_t first_bad_seq = 0;
  std::string expected_hash;
  std::string found_hash;
  std::int64_t checked = 0;
};

struct Report {
  std::string filename;
  std::string media_type = "text/html; charset=utf-8";
  std::string body;
};

// The usage log: append-only, hash-chained, owner-scoped reads.
class LogStore {
 public:
  LogStore(std::unique_ptr<LogBackend> backend, const Clock& clock);

  /// Persists `draft` as the next entry. A deny decision flags the entry as
  /// a violation; it is stored either way.
  UsageLogEntry append(const LogDraft& draft, Effect policy_decision);

  /// Throws Error{invalid_range} for from >= to, Error{validation} for bad paging.
  LogPage query(const LogQuery& query) const;

  UsageSummary summarize(const std::string& owner, Timestamp now, int days = 7) const;
  UsageSummary summarize_range(const std::string& owner, Timestamp from, Timestamp to) const;

  VerifyResult verify_chain() const;

  Report export_report(const std::string& owner, Timestamp from, Timestamp to) const;

  ChainState head() const { return backend_->head(); }
  bool healthy() noexcept { return backend_->healthy(); }
  LogBackend& backend() { return *backend_; }

 private:
  std::unique_ptr<LogBackend> backend_;
  const Clock& clock_;
  std::mutex append_mutex_;
};

/// Query validation shared with the HTTP layer.
void validate_query(const LogQuery& query);

}  // namespace itt::logstore
