#include "itt/core/model.hpp"

namespace itt {

std::string_view to_string(AccessKind kind) noexcept {
  switch (kind) {
    case AccessKind::Read: return "read";
    case AccessKind::Aggregate: return "aggregate";
    case AccessKind::Export: return "export";
    case AccessKind::Other: return "other";
  }
  return "other";
}

std::string_view to_string(PolicyFlag flag) noexcept {
  return flag == PolicyFlag::Violation ? "violation" : "none";
}

std::string_view to_string(Effect effect) noexcept {
  return effect == Effect::Deny ? "deny" : "allow";
}

std::string_view to_string(TokenKind kind) noexcept {
  return kind == TokenKind::Refresh ? "refresh" : "access";
}

std::optional<AccessKind> parse_access_kind(std::string_view text) noexcept {
  if (text == "read") return AccessKind::Read;
  if (text == "aggregate") return AccessKind::Aggregate;
  if (text == "export") return AccessKind::Export;
  if (text == "other") return AccessKind::Other;
  return std::nullopt;
}

std::optional<PolicyFlag> parse_policy_flag(std::string_view text) noexcept {
  if (text == "none") return PolicyFlag::None;
  if (text == "violation") return PolicyFlag::Violation;
  return std::nullopt;
}

std::optional<Effect> parse_effect(std::string_view text) noexcept {
  if (text == "allow") return Effect::Allow;
  if (text == "deny") return Effect::Deny;
  return std::nullopt;
}

std::optional<TokenKind> parse_token_kind(std::string_view text) noexcept {
  if (text == "access") return TokenKind::Access;
  if (text == "refresh") return TokenKind::Refresh;
  return std::nullopt;
}

}  // namespace itt
