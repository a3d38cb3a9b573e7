#include "itt/logstore/log_store.hpp"

#include "itt/core/canonical.hpp"
#include "itt/core/crypto.hpp"
#include "itt/core/error.hpp"
#include "itt/logstore/report.hpp"

namespace itt::logstore {

std::string_view to_string(SortOrder order) noexcept {
  return order == SortOrder::OccurredAsc ? "occurred_at_asc" : "occurred_at_desc";
}

std::optional<SortOrder> parse_sort_order(std::string_view text) noexcept {
  if (text == "occurred_at_desc") return SortOrder::OccurredDesc;
  if (text == "occurred_at_asc") return SortOrder::OccurredAsc;
  return std::nullopt;
}

void validate_query(const LogQuery& query) {
  if (query.owner.empty()) throw Error{Errc::validation, "owner is required", "owner"};
  if (query.from && query.to && *query.from >= *query.to) {
    throw Error{Errc::invalid_range, "from must be earlier than to", "from"};
  }
  if (query.page < 1) throw Error{Errc::validation, "page must be >= 1", "page"};
  if (query.per_page < 1 || query.per_page > kMaxPerPage) {
    throw Error{Errc::validation, "per_page must be within 1..500", "per_page"};
  }
  // (page - 1) * per_page must not overflow.
  if (query.page - 1 > std::numeric_limits<std::int64_t>::max() / query.per_page) {
    throw Error{Errc::validation, "page is out of range", "page"};
  }
}

LogStore::LogStore(std::unique_ptr<LogBackend> backend, const Clock& clock)
    : backend_(std::move(backend)), clock_(clock) {}

UsageLogEntry LogStore::append(const LogDraft& draft, Effect policy_decision) {
  std::lock_guard lock{append_mutex_};
  return backend_->append([&](const ChainState& head) {
    UsageLogEntry entry;
    entry.entry_id = crypto::uuid_v4();
    entry.seq = head.head_seq + 1;
    entry.occurred_at = draft.occurred_at;
    entry.recorded_at = clock_.now();
    entry.owner = draft.owner;
    entry.consumer = draft.consumer;
    entry.tool = draft.tool;
    entry.data_category = draft.data_category;
    entry.purpose = draft.purpose;
    entry.access_kind = draft.access_kind;
    entry.policy_flag =
        policy_decision == Effect::Deny ? PolicyFlag::Violation : PolicyFlag::None;
    entry.chain_hash = crypto::chain_step(head.head_hash, canonical_encode(entry));
    return entry;
  });
}

LogPage LogStore::query(const LogQuery& query) const {
  validate_query(query);
  return backend_->query(query);
}

UsageSummary LogStore::summarize(const std::string& owner, Timestamp now, int days) const {
  if (days < 1) throw Error{Errc::validation, "days must be >= 1", "days"};
  return summarize_range(owner, now - std::chrono::days{days}, now);
}

namespace {

UsageSummary aggregate(const std::string& owner, Timestamp from, Timestamp to,
                       const std::vector<UsageLogEntry>& entries) {
  using std::chrono::days;
  UsageSummary summary;
  summary.owner = owner;
  summary.window_start = from;
  summary.window_end = to;

  auto first_day = std::chrono::floor<days>(from);
  auto last_day = std::chrono::floor<days>(to - std::chrono::seconds{1});
  for (auto d = first_day; d <= last_day; d += days{1}) summary.by_day.push_back({format_day(d), 0});

  for (const auto& e : entries) {
    ++summary.total;
    ++summary.by_consumer[e.consumer];
    ++summary.by_tool[e.tool];
    auto index = (std::chrono::floor<days>(e.occurred_at) - first_day).count();
    ++summary.by_day[static_cast<std::size_t>(index)].count;
  }
  return summary;
}

}  // namespace

UsageSummary LogStore::summarize_range(const std::string& owner, Timestamp from,
                                       Timestamp to) const {
  if (from >= to) throw Error{Errc::invalid_range, "from must be earlier than to", "from"};
  return aggregate(owner, from, to, backend_->owner_entries(owner, from, to));
}

VerifyResult LogStore::verify_chain() const {
  VerifyResult result;
  Digest prev{};
  std::int64_t expected_seq = 1;

  ChainState head = backend_->scan([&](const StoredRow& row) {
    if (row.seq != expected_seq) {
      result.ok = false;
      result.first_bad_seq = expected_seq;
      result.found_hash = row.chain_hash;
      return false;
    }
    Digest expected = crypto::chain_step(prev, canonical_encode(row.fields));
    std::string expected_hex = crypto::to_hex(expected);
    if (expected_hex != row.chain_hash) {
      result.ok = false;
      result.first_bad_seq = row.seq;
      result.expected_hash = std::move(expected_hex);
      result.found_hash = row.chain_hash;
      return false;
    }
    prev = expected;
    ++result.checked;
    ++expected_seq;
    return true;
  });

  if (result.ok) {
    // Rows and head must agree: a truncated tail or a rewritten head is tampering too.
    std::int64_t last_seq = expected_seq - 1;
    if (head.head_seq != last_seq || head.head_hash != prev) {
      result.ok = false;
      result.first_bad_seq = std::min(head.head_seq, last_seq) + 1;
      result.expected_hash = crypto::to_hex(head.head_hash);
      result.found_hash = crypto::to_hex(prev);
    }
  }
  return result;
}

Report LogStore::export_report(const std::string& owner, Timestamp from, Timestamp to) const {
  if (from >= to) throw Error{Errc::invalid_range, "from must be earlier than to", "from"};
  auto entries = backend_->owner_entries(owner, from, to);
  UsageSummary summary = aggregate(owner, from, to, entries);
  Report report;
  report.filename = report_filename(owner, from, to);
  report.body = render_report_html(owner, from, to, summary, entries);
  return report;
}

}  // namespace itt::logstore
