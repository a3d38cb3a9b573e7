#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace itt {

enum class Errc {
  validation,
  invalid_range,
  not_found,
  forbidden,
  unauthorized,
  duplicate_identifier,
  unknown_identifier,
  weak_password,
  authentication_failed,
  token_malformed,
  token_bad_signature,
  token_expired,
  token_revoked,
  token_wrong_kind,
  last_admin,
  storage,
};

std::string_view errc_name(Errc code) noexcept;

// Domain failure carrying a stable code and, when it concerns one input, the
// offending field.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::string field = {})
      : std::runtime_error(message), code_(code), field_(std::move(field)) {}

  Errc code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  Errc code_;
  std::string field_;
};

}  // namespace itt
