#include "itt/gateway/json_codec.hpp"

#include "itt/core/crypto.hpp"

namespace itt::gateway {

json to_json(const UsageLogEntry& e) {
  return {
      {"entry_id", e.entry_id},
      {"seq", e.seq},
      {"occurred_at", format_timestamp(e.occurred_at)},
      {"recorded_at", format_timestamp(e.recorded_at)},
      {"owner", e.owner},
      {"consumer", e.consumer},
      {"tool", e.tool},
      {"data_category", e.data_category},
      {"purpose", e.purpose},
      {"access_kind", to_string(e.access_kind)},
      {"policy_flag", to_string(e.policy_flag)},
      {"chain_hash", crypto::to_hex(e.chain_hash)},
  };
}

json to_json(const UsagePolicy& p) {
  return {
      {"policy_id", p.policy_id},
      {"owner", p.owner},
      {"subject", p.subject},
      {"data_category", p.data_category},
      {"effect", to_string(p.effect)},
      {"created_at", format_timestamp(p.created_at)},
  };
}

json to_json(const UserRecord& u) {
  return {
      {"main_id", u.main_id},
      {"secondary_ids", u.secondary_ids},
      {"is_admin", u.is_admin},
      {"created_at", format_timestamp(u.created_at)},
      {"updated_at", format_timestamp(u.updated_at)},
  };
}

json to_json(const UsageSummary& s) {
  json by_day = json::array();
  for (const auto& d : s.by_day) by_day.push_back({{"day", d.day}, {"count", d.count}});
  return {
      {"owner", s.owner},
      {"window_start", format_timestamp(s.window_start)},
      {"window_end", format_timestamp(s.window_end)},
      {"total", s.total},
      {"by_consumer", s.by_consumer},
      {"by_tool", s.by_tool},
      {"by_day", by_day},
  };
}

json to_json(const policy::PolicyDecision& d) {
  return {
      {"effect", to_string(d.effect)},
      {"matched_policy_id", d.matched_policy_id ? json(*d.matched_policy_id) : json(nullptr)},
      {"reason", policy::to_string(d.reason)},
  };
}

json to_json(const identity::TokenPair& p) {
  return {
      {"token_type", "Bearer"},
      {"access_token", p.access_token},
      {"refresh_token", p.refresh_token},
      {"principal", p.access.principal},
      {"access_expires_at", format_timestamp(p.access.expires_at)},
      {"refresh_expires_at", format_timestamp(p.refresh.expires_at)},
      {"expires_in", (p.access.expires_at - p.access.issued_at).count()},
  };
}

json to_json(const logstore::LogPage& page) {
  json entries = json::array();
  for (const auto& e : page.entries) entries.push_back(to_json(e));
  return {
      {"entries", entries},
      {"total_count", page.total_count},
      {"page", page.page},
      {"per_page", page.per_page},
  };
}

json to_json(const logstore::VerifyResult& r) {
  if (r.ok) return {{"ok", true}, {"checked", r.checked}};
  return {
      {"ok", false},
      {"checked", r.checked},
      {"first_bad_seq", r.first_bad_seq},
      {"expected_hash", r.expected_hash},
      {"found_hash", r.found_hash},
  };
}

json error_body(std::string_view code, std::string_view message, std::string_view field) {
  json err = {{"code", code}, {"message", message}};
  if (!field.empty()) err["field"] = field;
  return {{"error", err}};
}

json validation_body(const std::vector<FieldError>& errors) {
  json body = error_body("validation_failed", "submission failed validation",
                         errors.empty() ? std::string_view{} : errors.front().field);
  json details = json::array();
  for (const auto& e : errors) details.push_back({{"field", e.field}, {"message", e.message}});
  body["error"]["details"] = details;
  return body;
}

}  // namespace itt::gateway
