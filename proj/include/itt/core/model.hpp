#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "itt/core/time.hpp"

namespace itt {

using Digest = std::array<std::uint8_t, 32>;

enum class AccessKind { Read, Aggregate, Export, Other };
enum class PolicyFlag { None, Violation };
enum class Effect { Allow, Deny };
enum class TokenKind { Access, Refresh };

std::string_view to_string(AccessKind kind) noexcept;
std::string_view to_string(PolicyFlag flag) noexcept;
std::string_view to_string(Effect effect) noexcept;
std::string_view to_string(TokenKind kind) noexcept;

// Exact lowercase names only; callers normalize first.
std::optional<AccessKind> parse_access_kind(std::string_view text) noexcept;
std::optional<PolicyFlag> parse_policy_flag(std::string_view text) noexcept;
std::optional<Effect> parse_effect(std::string_view text) noexcept;
std::optional<TokenKind> parse_token_kind(std::string_view text) noexcept;

inline constexpr std::string_view kWildcard = "*";

// Raw, unvalidated fields as a monitor submits them.
struct LogSubmission {
  std::string occurred_at;
  std::string owner;
  std::string consumer;
  std::string tool;
  std::string data_category;
  std::string purpose;
  std::string access_kind;
};

// A submission that passed validation: trimmed strings, parsed timestamp,
// normalized enum.
struct LogDraft {
  Timestamp occurred_at{};
  std::string owner;
  std::string consumer;
  std::string tool;
  std::string data_category;
  std::string purpose;
  AccessKind access_kind = AccessKind::Read;

  friend bool operator==(const LogDraft&, const LogDraft&) = default;
};

struct UsageLogEntry {
  std::string entry_id;
  std::int64_t seq = 0;
  Timestamp occurred_at{};
  Timestamp recorded_at{};
  std::string owner;
  std::string consumer;
  std::string tool;
  std::string data_category;
  std::string purpose;
  AccessKind access_kind = AccessKind::Read;
  PolicyFlag policy_flag = PolicyFlag::None;
  Digest chain_hash{};

  friend bool operator==(const UsageLogEntry&, const UsageLogEntry&) = default;
};

struct UsagePolicy {
  std::string policy_id;
  std::string owner;
  std::string subject;
  std::string data_category;
  Effect effect = Effect::Allow;
  Timestamp created_at{};

  friend bool operator==(const UsagePolicy&, const UsagePolicy&) = default;
};

struct UserRecord {
  std::string main_id;
  std::vector<std::string> secondary_ids;  // sorted
  std::string credential_hash;
  bool is_admin = false;
  Timestamp created_at{};
  Timestamp updated_at{};
};

struct SessionToken {
  std::string token_id;
  std::string principal;
  Timestamp issued_at{};
  Timestamp expires_at{};
  TokenKind kind = TokenKind::Access;
  bool revoked = false;
};

struct DayCount {
  std::string day;  // YYYY-MM-DD
  std::int64_t count = 0;

  friend bool operator==(const DayCount&, const DayCount&) = default;
};

struct UsageSummary {
  std::string owner;
  Timestamp window_start{};
  Timestamp window_end{};
  std::int64_t total = 0;
  std::map<std::string, std::int64_t> by_consumer;
  std::map<std::string, std::int64_t> by_tool;
  std::vector<DayCount> by_day;

  friend bool operator==(const UsageSummary&, const UsageSummary&) = default;
};

}  // namespace itt
