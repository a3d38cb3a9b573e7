#pragma once

#include <string>
#include <string_view>

#include "itt/core/model.hpp"

namespace itt::identity {

struct TokenClaims {
  std::string token_id;  // jti
  std::string principal;  // sub
  TokenKind kind = TokenKind::Access;  // knd
  Timestamp issued_at{};   // iat
  Timestamp expires_at{};  // exp

  friend bool operator==(const TokenClaims&, const TokenClaims&) = default;
};

/// Compact JWS, HS256.
std::string sign_token(const TokenClaims& claims, std::string_view key);

/// Checks structure and signature only; expiry and revocation are the
/// caller's concern. Throws Error{token_malformed} or
/// Error{token_bad_signature}. The signature is checked over the raw
/// `header.payload` text before anything is decoded.
TokenClaims parse_signed_token(std::string_view token, std::string_view key);

}  // namespace itt::identity
