#pragma once

// Brute-force reference computations for the log and policy stores. They
// share no code with the library beyond the plain data structs.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "itt/core/model.hpp"
#include "itt/logstore/log_backend.hpp"
#include "sha256_oracle.hpp"

namespace oracle {

inline long long epoch(itt::Timestamp ts) { return ts.time_since_epoch().count(); }

/// Gregorian date of a day count since 1970-01-01 (days >= 0).
inline std::string civil_day(long long days) {
  long long z = days + 719468;
  long long era = z / 146097;
  long long doe = z - era * 146097;
  long long yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  long long y = yoe + era * 400;
  long long doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  long long mp = (5 * doy + 2) / 153;
  long long d = doy - (153 * mp + 2) / 5 + 1;
  long long m = mp < 10 ? mp + 3 : mp - 9;
  if (m <= 2) ++y;
  char buf[80];
  std::snprintf(buf, sizeof buf, "%04lld-%02lld-%02lld", y, m, d);
  return buf;
}

inline std::string civil_time(long long seconds) {
  long long day = seconds / 86400;
  long long rest = seconds % 86400;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%sT%02lld:%02lld:%02lldZ", civil_day(day).c_str(), rest / 3600,
                rest / 60 % 60, rest % 60);
  return buf;
}

inline const char* access_name(itt::AccessKind k) {
  switch (k) {
    case itt::AccessKind::Read: return "read";
    case itt::AccessKind::Aggregate: return "aggregate";
    case itt::AccessKind::Export: return "export";
    case itt::AccessKind::Other: return "other";
  }
  return "";
}

inline std::string escape(const std::string& v) {
  std::string out;
  for (char c : v) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out;
}

inline std::string encode(const itt::UsageLogEntry& e) {
  std::string out;
  auto line = [&](const char* name, const std::string& value) {
    if (!out.empty()) out += '\n';
    out += name;
    out += '=';
    out += escape(value);
  };
  line("seq", std::to_string(e.seq));
  line("entry_id", e.entry_id);
  line("occurred_at", civil_time(epoch(e.occurred_at)));
  line("recorded_at", civil_time(epoch(e.recorded_at)));
  line("owner", e.owner);
  line("consumer", e.consumer);
  line("tool", e.tool);
  line("data_category", e.data_category);
  line("purpose", e.purpose);
  line("access_kind", access_name(e.access_kind));
  line("policy_flag", e.policy_flag == itt::PolicyFlag::Violation ? "violation" : "none");
  return out;
}

/// Chain hashes recomputed from genesis over `entries` in seq order.
inline std::vector<std::array<std::uint8_t, 32>> chain(
    const std::vector<itt::UsageLogEntry>& entries) {
  std::vector<std::array<std::uint8_t, 32>> out;
  std::array<std::uint8_t, 32> prev{};
  for (const auto& e : entries) {
    prev = sha256(as_bytes(prev) + encode(e));
    out.push_back(prev);
  }
  return out;
}

struct QueryAnswer {
  std::vector<std::int64_t> seqs;
  std::int64_t total = 0;
};

inline QueryAnswer query(const std::vector<itt::UsageLogEntry>& all,
                         const itt::logstore::LogQuery& q) {
  std::vector<itt::UsageLogEntry> hits;
  for (const auto& e : all) {
    if (e.owner != q.owner) continue;
    if (q.from && e.occurred_at < *q.from) continue;
    if (q.to && !(e.occurred_at < *q.to)) continue;
    if (q.consumer && e.consumer != *q.consumer) continue;
    if (q.tool && e.tool != *q.tool) continue;
    if (q.data_category && e.data_category != *q.data_category) continue;
    hits.push_back(e);
  }
  bool asc = q.order == itt::logstore::SortOrder::OccurredAsc;
  std::sort(hits.begin(), hits.end(), [asc](const auto& a, const auto& b) {
    auto ka = std::pair{epoch(a.occurred_at), a.seq};
    auto kb = std::pair{epoch(b.occurred_at), b.seq};
    return asc ? ka < kb : kb < ka;
  });
  QueryAnswer answer;
  answer.total = static_cast<std::int64_t>(hits.size());
  std::int64_t start = (q.page - 1) * q.per_page;
  for (std::int64_t i = start; i < answer.total && i < start + q.per_page; ++i) {
    answer.seqs.push_back(hits[static_cast<std::size_t>(i)].seq);
  }
  return answer;
}

struct SummaryAnswer {
  std::int64_t total = 0;
  std::map<std::string, std::int64_t> by_consumer;
  std::map<std::string, std::int64_t> by_tool;
  std::vector<std::pair<std::string, std::int64_t>> by_day;
};

/// Window [now - days, now); one bucket per UTC day touched by the window.
inline SummaryAnswer summary(const std::vector<itt::UsageLogEntry>& all, const std::string& owner,
                             long long now, int days) {
  long long from = now - static_cast<long long>(days) * 86400;
  long long first_day = from / 86400;
  long long last_day = (now - 1) / 86400;
  SummaryAnswer a;
  for (long long d = first_day; d <= last_day; ++d) a.by_day.emplace_back(civil_day(d), 0);
  for (const auto& e : all) {
    long long t = epoch(e.occurred_at);
    if (e.owner != owner || t < from || t >= now) continue;
    ++a.total;
    ++a.by_consumer[e.consumer];
    ++a.by_tool[e.tool];
    ++a.by_day[static_cast<std::size_t>(t / 86400 - first_day)].second;
  }
  return a;
}

/// Expected effect: any matching deny wins; otherwise allow (explicit or default).
struct PolicyAnswer {
  itt::Effect effect = itt::Effect::Allow;
  bool explicit_rule = false;
  std::string expected_id;
};

inline PolicyAnswer policy(const std::vector<itt::UsagePolicy>& rules, const std::string& consumer,
                           const std::string& category) {
  auto matches = [&](const itt::UsagePolicy& r) {
    return (r.subject == "*" || r.subject == consumer) &&
           (r.data_category == "*" || r.data_category == category);
  };
  PolicyAnswer a;
  bool any_deny = false, any_allow = false;
  for (const auto& r : rules) {
    if (!matches(r)) continue;
    (r.effect == itt::Effect::Deny ? any_deny : any_allow) = true;
  }
  if (!any_deny && !any_allow) return a;
  a.explicit_rule = true;
  a.effect = any_deny ? itt::Effect::Deny : itt::Effect::Allow;
  // Most specific, then newest, then latest in list order.
  std::tuple<int, long long, std::size_t> best{-1, 0, 0};
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto& r = rules[i];
    if (!matches(r) || r.effect != a.effect) continue;
    std::tuple<int, long long, std::size_t> key{(r.subject != "*") + (r.data_category != "*"),
                                                epoch(r.created_at), i};
    if (key > best) {
      best = key;
      a.expected_id = r.policy_id;
    }
  }
  return a;
}

}  // namespace oracle
