#pragma once

#include <json.hpp>

#include "itt/core/model.hpp"
#include "itt/core/validation.hpp"
#include "itt/identity/identity_service.hpp"
#include "itt/logstore/log_store.hpp"
#include "itt/policy/policy_store.hpp"

namespace itt::gateway {

using nlohmann::json;

json to_json(const UsageLogEntry& entry);
json to_json(const UsagePolicy& policy);
/// Never includes the credential hash.
json to_json(const UserRecord& user);
json to_json(const UsageSummary& summary);
json to_json(const policy::PolicyDecision& decision);
json to_json(const identity::TokenPair& pair);
json to_json(const logstore::LogPage& page);
json to_json(const logstore::VerifyResult& result);

json error_body(std::string_view code, std::string_view message, std::string_view field = {});
json validation_body(const std::vector<FieldError>& errors);

}  // namespace itt::gateway
