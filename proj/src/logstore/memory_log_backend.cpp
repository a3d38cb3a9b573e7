#include <algorithm>
#include <mutex>

#include "itt/core/crypto.hpp"
#include "itt/core/error.hpp"
#include "itt/logstore/log_backend.hpp"

namespace itt::logstore {
namespace {

bool matches(const UsageLogEntry& e, const LogQuery& q) {
  return e.owner == q.owner && (!q.from || e.occurred_at >= *q.from) &&
         (!q.to || e.occurred_at < *q.to) && (!q.consumer || e.consumer == *q.consumer) &&
         (!q.tool || e.tool == *q.tool) && (!q.data_category || e.data_category == *q.data_category);
}

}  // namespace

ChainState MemoryLogBackend::head() const {
  std::shared_lock lock{mutex_};
  return head_;
}

UsageLogEntry MemoryLogBackend::append(const EntryBuilder& build) {
  std::unique_lock lock{mutex_};
  UsageLogEntry entry = build(head_);
  entries_.push_back(entry);
  head_ = ChainState{entry.seq, entry.chain_hash};
  return entry;
}

LogPage MemoryLogBackend::query(const LogQuery& q) const {
  std::shared_lock lock{mutex_};
  std::vector<UsageLogEntry> hits;
  for (const auto& e : entries_) {
    if (matches(e, q)) hits.push_back(e);
  }
  std::sort(hits.begin(), hits.end(), [&](const UsageLogEntry& a, const UsageLogEntry& b) {
    auto ka = std::tie(a.occurred_at, a.seq);
    auto kb = std::tie(b.occurred_at, b.seq);
    return q.order == SortOrder::OccurredAsc ? ka < kb : kb < ka;
  });
  LogPage page;
  page.page = q.page;
  page.per_page = q.per_page;
  page.total_count = static_cast<std::int64_t>(hits.size());
  std::int64_t offset = (q.page - 1) * q.per_page;
  if (offset < page.total_count) {
    auto last = std::min(offset + q.per_page, page.total_count);
    page.entries.assign(hits.begin() + offset, hits.begin() + last);
  }
  return page;
}

std::vector<UsageLogEntry> MemoryLogBackend::owner_entries(const std::string& owner,
                                                           Timestamp from, Timestamp to) const {
  LogQuery q;
  q.owner = owner;
  q.from = from;
  q.to = to;
  q.per_page = std::numeric_limits<std::int32_t>::max();
  q.order = SortOrder::OccurredAsc;
  return query(q).entries;
}

ChainState MemoryLogBackend::scan(const std::function<bool(const StoredRow&)>& visit) const {
  std::shared_lock lock{mutex_};
  for (const auto& e : entries_) {
    StoredRow row{e.seq, canonical_fields(e), crypto::to_hex(e.chain_hash)};
    if (!visit(row)) break;
  }
  return head_;
}

void MemoryLogBackend::tamper(std::int64_t seq,
                              const std::function<void(UsageLogEntry&)>& mutate) {
  std::unique_lock lock{mutex_};
  for (auto& e : entries_) {
    if (e.seq == seq) {
      mutate(e);
      return;
    }
  }
  throw Error{Errc::not_found, "no entry with seq " + std::to_string(seq)};
}

}  // namespace itt::logstore
