#include "itt/core/crypto.hpp"
#include "itt/core/error.hpp"
#include "itt/logstore/log_backend.hpp"
#include "itt/storage/database.hpp"

namespace itt::logstore {
namespace {

using storage::Connection;
using storage::Statement;

constexpr std::string_view kColumns =
    "seq, entry_id, occurred_at, recorded_at, owner, consumer, tool, data_category, purpose, "
    "access_kind, policy_flag, chain_hash";

StoredRow read_row(const Statement& stmt) {
  StoredRow row;
  row.seq = stmt.integer(0);
  row.fields[0] = std::to_string(row.seq);
  for (int i = 1; i < static_cast<int>(row.fields.size()); ++i) row.fields[i] = stmt.text(i);
  row.chain_hash = stmt.text(static_cast<int>(row.fields.size()));
  return row;
}

UsageLogEntry decode_entry(const Statement& stmt) {
  StoredRow row = read_row(stmt);
  auto corrupt = [&](std::string_view what) {
    return Error{Errc::storage,
                 "corrupt stored entry seq " + std::to_string(row.seq) + ": " + std::string{what}};
  };
  UsageLogEntry e;
  e.seq = row.seq;
  e.entry_id = row.fields[1];
  auto occurred = parse_canonical_timestamp(row.fields[2]);
  auto recorded = parse_canonical_timestamp(row.fields[3]);
  if (!occurred || !recorded) throw corrupt("timestamp");
  e.occurred_at = *occurred;
  e.recorded_at = *recorded;
  e.owner = row.fields[4];
  e.consumer = row.fields[5];
  e.tool = row.fields[6];
  e.data_category = row.fields[7];
  e.purpose = row.fields[8];
  auto kind = parse_access_kind(row.fields[9]);
  auto flag = parse_policy_flag(row.fields[10]);
  auto hash = crypto::digest_from_hex(row.chain_hash);
  if (!kind || !flag || !hash) throw corrupt("field encoding");
  e.access_kind = *kind;
  e.policy_flag = *flag;
  e.chain_hash = *hash;
  return e;
}

ChainState read_head(Connection& conn) {
  auto stmt = conn.prepare("SELECT head_seq, head_hash FROM chain_head WHERE id = 1");
  if (!stmt.step()) throw Error{Errc::storage, "chain head missing"};
  ChainState state;
  state.head_seq = stmt.integer(0);
  auto hash = crypto::digest_from_hex(stmt.text(1));
  if (!hash) throw Error{Errc::storage, "chain head hash is corrupt"};
  state.head_hash = *hash;
  return state;
}

// WHERE clause and its bindings for a query; order of bindings matches '?'.
struct Filter {
  std::string where;
  std::vector<std::string> params;

  void add(std::string_view clause, std::string value) {
    where += " AND ";
    where += clause;
    params.push_back(std::move(value));
  }
};

Filter build_filter(const LogQuery& q) {
  Filter f;
  f.where = "owner = ?";
  f.params.push_back(q.owner);
  if (q.from) f.add("occurred_at >= ?", format_timestamp(*q.from));
  if (q.to) f.add("occurred_at < ?", format_timestamp(*q.to));
  if (q.consumer) f.add("consumer = ?", *q.consumer);
  if (q.tool) f.add("tool = ?", *q.tool);
  if (q.data_category) f.add("data_category = ?", *q.data_category);
  return f;
}

}  // namespace

SqliteLogBackend::SqliteLogBackend(std::shared_ptr<storage::Database> db) : db_(std::move(db)) {}

ChainState SqliteLogBackend::head() const {
  return db_->read([](Connection& conn) { return read_head(conn); });
}

UsageLogEntry SqliteLogBackend::append(const EntryBuilder& build) {
  return db_->write([&](Connection& conn) {
    ChainState head = read_head(conn);
    UsageLogEntry entry = build(head);
    auto fields = canonical_fields(entry);
    std::string hash_hex = crypto::to_hex(entry.chain_hash);

    auto insert = conn.prepare(
        "INSERT INTO entries (seq, entry_id, occurred_at, recorded_at, owner, consumer, tool, "
        "data_category, purpose, access_kind, policy_flag, chain_hash) "
        "VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)");
    insert.bind(1, entry.seq);
    for (int i = 1; i < static_cast<int>(fields.size()); ++i) insert.bind(i + 1, fields[i]);
    insert.bind(static_cast<int>(fields.size()) + 1, hash_hex);
    insert.run();

    auto advance = conn.prepare("UPDATE chain_head SET head_seq = ?, head_hash = ? WHERE id = 1");
    advance.bind(1, entry.seq).bind(2, hash_hex).run();
    return entry;
  });
}

LogPage SqliteLogBackend::query(const LogQuery& q) const {
  Filter filter = build_filter(q);
  return db_->read([&](Connection& conn) {
    LogPage page;
    page.page = q.page;
    page.per_page = q.per_page;

    auto count = conn.prepare("SELECT COUNT(*) FROM entries WHERE " + filter.where);
    for (std::size_t i = 0; i < filter.params.size(); ++i) count.bind(static_cast<int>(i + 1), filter.params[i]);
    count.step();
    page.total_count = count.integer(0);

    std::int64_t offset = (q.page - 1) * q.per_page;
    if (offset >= page.total_count) return page;

    std::string_view dir = q.order == SortOrder::OccurredAsc ? "ASC" : "DESC";
    std::string sql = "SELECT " + std::string{kColumns} + " FROM entries WHERE " + filter.where +
                      " ORDER BY occurred_at " + std::string{dir} + ", seq " + std::string{dir} +
                      " LIMIT ? OFFSET ?";
    auto select = conn.prepare(sql);
    int idx = 1;
    for (const auto& p : filter.params) select.bind(idx++, p);
    select.bind(idx++, q.per_page).bind(idx, offset);
    while (select.step()) page.entries.push_back(decode_entry(select));
    return page;
  });
}

std::vector<UsageLogEntry> SqliteLogBackend::owner_entries(const std::string& owner,
                                                           Timestamp from, Timestamp to) const {
  return db_->read([&](Connection& conn) {
    auto select = conn.prepare("SELECT " + std::string{kColumns} +
                               " FROM entries WHERE owner = ? AND occurred_at >= ? AND "
                               "occurred_at < ? ORDER BY occurred_at ASC, seq ASC");
    select.bind(1, owner).bind(2, format_timestamp(from)).bind(3, format_timestamp(to));
    std::vector<UsageLogEntry> out;
    while (select.step()) out.push_back(decode_entry(select));
    return out;
  });
}

ChainState SqliteLogBackend::scan(const std::function<bool(const StoredRow&)>& visit) const {
  return db_->read([&](Connection& conn) {
    ChainState head = read_head(conn);
    auto select =
        conn.prepare("SELECT " + std::string{kColumns} + " FROM entries ORDER BY seq ASC");
    while (select.step()) {
      if (!visit(read_row(select))) break;
    }
    return head;
  });
}

bool SqliteLogBackend::healthy() noexcept { return db_->probe_writable(); }

}  // namespace itt::logstore
