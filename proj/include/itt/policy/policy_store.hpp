#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "itt/core/model.hpp"
#include "itt/core/time.hpp"

namespace itt::storage {
class Database;
}

namespace itt::policy {

enum class DecisionReason { ExplicitDeny, ExplicitAllow, DefaultAllow };

std::string_view to_string(DecisionReason reason) noexcept;

struct PolicyDecision {
  Effect effect = Effect::Allow;
  std::optional<std::string> matched_policy_id;  // absent iff DefaultAllow
  DecisionReason reason = DecisionReason::DefaultAllow;

  friend bool operator==(const PolicyDecision&, const PolicyDecision&) = default;
};

/// Number of non-wildcard fields among (subject, data_category).
int specificity(const UsagePolicy& rule) noexcept;

/// Deny overrides allow, and no match means allow. Among the matching
/// rules of the winning effect, the most specific is reported; ties go to
/// the newest created_at, then to the later position in `rules`.
PolicyDecision decide(std::span<const UsagePolicy> rules, std::string_view consumer,
                      std::string_view data_category);

class PolicyStore {
 public:
  PolicyStore(std::shared_ptr<storage::Database> db, const Clock& clock);

  /// Upserts on (owner, subject, data_category); re-setting keeps the id.
  UsagePolicy set_policy(const std::string& owner, const std::string& subject,
                         const std::string& data_category, Effect effect);

  /// Ordered by created_at, then insertion.
  std::vector<UsagePolicy> list_policies(const std::string& owner) const;

  void delete_policy(const std::string& owner, const std::string& policy_id);

  PolicyDecision evaluate(const std::string& owner, const std::string& consumer,
                          const std::string& data_category) const;

 private:
  std::shared_ptr<storage::Database> db_;
  const Clock& clock_;
};

}  // namespace itt::policy
