#include "itt/core/error.hpp"

namespace itt {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::validation: return "validation_failed";
    case Errc::invalid_range: return "invalid_range";
    case Errc::not_found: return "not_found";
    case Errc::forbidden: return "forbidden";
    case Errc::unauthorized: return "unauthorized";
    case Errc::duplicate_identifier: return "duplicate_identifier";
    case Errc::unknown_identifier: return "unknown_identifier";
    case Errc::weak_password: return "weak_password";
    case Errc::authentication_failed: return "authentication_failed";
    case Errc::token_malformed: return "token_malformed";
    case Errc::token_bad_signature: return "token_bad_signature";
    case Errc::token_expired: return "token_expired";
    case Errc::token_revoked: return "token_revoked";
    case Errc::token_wrong_kind: return "token_wrong_kind";
    case Errc::last_admin: return "last_admin";
    case Errc::storage: return "storage_failure";
  }
  return "unknown";
}

}  // namespace itt
