#include "itt/policy/policy_store.hpp"

#include <tuple>

#include "itt/core/crypto.hpp"
#include "itt/core/error.hpp"
#include "itt/core/validation.hpp"
#include "itt/storage/database.hpp"

namespace itt::policy {
namespace {

using storage::Connection;
using storage::Statement;

UsagePolicy read_policy(const Statement& stmt) {
  UsagePolicy p;
  p.policy_id = stmt.text(0);
  p.owner = stmt.text(1);
  p.subject = stmt.text(2);
  p.data_category = stmt.text(3);
  auto effect = parse_effect(stmt.text(4));
  auto created = parse_canonical_timestamp(stmt.text(5));
  if (!effect || !created) throw Error{Errc::storage, "corrupt policy " + p.policy_id};
  p.effect = *effect;
  p.created_at = *created;
  return p;
}

constexpr std::string_view kSelect =
    "SELECT policy_id, owner, subject, data_category, effect, created_at FROM policies ";

std::vector<UsagePolicy> load_rules(Connection& conn, const std::string& owner) {
  auto stmt = conn.prepare(std::string{kSelect} + "WHERE owner = ? ORDER BY created_at, ordinal");
  stmt.bind(1, owner);
  std::vector<UsagePolicy> out;
  while (stmt.step()) out.push_back(read_policy(stmt));
  return out;
}

bool matches(const UsagePolicy& rule, std::string_view consumer, std::string_view category) {
  return (rule.subject == kWildcard || rule.subject == consumer) &&
         (rule.data_category == kWildcard || rule.data_category == category);
}

}  // namespace

std::string_view to_string(DecisionReason reason) noexcept {
  switch (reason) {
    case DecisionReason::ExplicitDeny: return "explicit_deny";
    case DecisionReason::ExplicitAllow: return "explicit_allow";
    case DecisionReason::DefaultAllow: return "default_allow";
  }
  return "default_allow";
}

int specificity(const UsagePolicy& rule) noexcept {
  return (rule.subject != kWildcard ? 1 : 0) + (rule.data_category != kWildcard ? 1 : 0);
}

PolicyDecision decide(std::span<const UsagePolicy> rules, std::string_view consumer,
                      std::string_view data_category) {
  auto best_of = [&](Effect effect) -> const UsagePolicy* {
    const UsagePolicy* best = nullptr;
    for (const auto& rule : rules) {
      if (rule.effect != effect || !matches(rule, consumer, data_category)) continue;
      // >= lets a later rule win full ties.
      if (best == nullptr || std::tuple(specificity(rule), rule.created_at) >=
                                 std::tuple(specificity(*best), best->created_at)) {
        best = &rule;
      }
    }
    return best;
  };

  if (const auto* deny = best_of(Effect::Deny)) {
    return {Effect::Deny, deny->policy_id, DecisionReason::ExplicitDeny};
  }
  if (const auto* allow = best_of(Effect::Allow)) {
    return {Effect::Allow, allow->policy_id, DecisionReason::ExplicitAllow};
  }
  return {Effect::Allow, std::nullopt, DecisionReason::DefaultAllow};
}

PolicyStore::PolicyStore(std::shared_ptr<storage::Database> db, const Clock& clock)
    : db_(std::move(db)), clock_(clock) {}

UsagePolicy PolicyStore::set_policy(const std::string& owner_raw, const std::string& subject_raw,
                                    const std::string& category_raw, Effect effect) {
  std::string owner = trim(owner_raw);
  std::string subject = trim(subject_raw);
  std::string category = trim(category_raw);
  if (owner.empty()) throw Error{Errc::validation, "owner must not be empty", "owner"};
  if (owner == kWildcard) throw Error{Errc::validation, "owner must not be a wildcard", "owner"};
  if (subject.empty()) throw Error{Errc::validation, "subject must not be empty", "subject"};
  if (category.empty()) {
    throw Error{Errc::validation, "data_category must not be empty", "data_category"};
  }

  return db_->write([&](Connection& conn) {
    auto find = conn.prepare(std::string{kSelect} +
                             "WHERE owner = ? AND subject = ? AND data_category = ?");
    find.bind(1, owner).bind(2, subject).bind(3, category);
    if (find.step()) {
      UsagePolicy existing = read_policy(find);
      auto update = conn.prepare("UPDATE policies SET effect = ? WHERE policy_id = ?");
      update.bind(1, to_string(effect)).bind(2, existing.policy_id).run();
      existing.effect = effect;
      return existing;
    }
    UsagePolicy p{crypto::uuid_v4(), owner, subject, category, effect, clock_.now()};
    auto insert = conn.prepare(
        "INSERT INTO policies (policy_id, owner, subject, data_category, effect, created_at) "
        "VALUES (?, ?, ?, ?, ?, ?)");
    insert.bind(1, p.policy_id)
        .bind(2, p.owner)
        .bind(3, p.subject)
        .bind(4, p.data_category)
        .bind(5, to_string(p.effect))
        .bind(6, format_timestamp(p.created_at))
        .run();
    return p;
  });
}

std::vector<UsagePolicy> PolicyStore::list_policies(const std::string& owner) const {
  return db_->read([&](Connection& conn) { return load_rules(conn, owner); });
}

void PolicyStore::delete_policy(const std::string& owner, const std::string& policy_id) {
  db_->write([&](Connection& conn) {
    auto find = conn.prepare("SELECT owner FROM policies WHERE policy_id = ?");
    find.bind(1, policy_id);
    if (!find.step()) throw Error{Errc::not_found, "no policy " + policy_id, "policy_id"};
    if (find.text(0) != owner) {
      throw Error{Errc::forbidden, "policy belongs to another owner", "policy_id"};
    }
    auto del = conn.prepare("DELETE FROM policies WHERE policy_id = ?");
    del.bind(1, policy_id).run();
  });
}

PolicyDecision PolicyStore::evaluate(const std::string& owner, const std::string& consumer,
                                     const std::string& data_category) const {
  if (owner.empty()) throw Error{Errc::validation, "owner must not be empty", "owner"};
  if (consumer.empty() || consumer == kWildcard) {
    throw Error{Errc::validation, "consumer must be a concrete identifier", "consumer"};
  }
  if (data_category.empty() || data_category == kWildcard) {
    throw Error{Errc::validation, "data_category must be a concrete category", "data_category"};
  }
  auto rules = list_policies(owner);
  return decide(rules, consumer, data_category);
}

}  // namespace itt::policy
