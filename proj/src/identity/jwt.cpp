#include "itt/identity/jwt.hpp"

#include <json.hpp>

#include "itt/core/crypto.hpp"
#include "itt/core/error.hpp"

namespace itt::identity {
namespace {

using nlohmann::json;

const std::string& encoded_header() {
  static const std::string header = crypto::base64url_encode(R"({"alg":"HS256","typ":"JWT"})");
  return header;
}

std::string signature_for(std::string_view signing_input, std::string_view key) {
  Digest mac = crypto::hmac_sha256(key, signing_input);
  return std::string(reinterpret_cast<const char*>(mac.data()), mac.size());
}

Error malformed(std::string message) { return Error{Errc::token_malformed, std::move(message)}; }

}  // namespace

std::string sign_token(const TokenClaims& claims, std::string_view key) {
  json payload = {
      {"sub", claims.principal},
      {"jti", claims.token_id},
      {"iat", claims.issued_at.time_since_epoch().count()},
      {"exp", claims.expires_at.time_since_epoch().count()},
      {"knd", to_string(claims.kind)},
  };
  std::string signing_input = encoded_header() + "." + crypto::base64url_encode(payload.dump());
  return signing_input + "." + crypto::base64url_encode(signature_for(signing_input, key));
}

TokenClaims parse_signed_token(std::string_view token, std::string_view key) {
  auto first = token.find('.');
  auto second = first == std::string_view::npos ? first : token.find('.', first + 1);
  if (second == std::string_view::npos || token.find('.', second + 1) != std::string_view::npos) {
    throw malformed("token must have three segments");
  }
  std::string_view signing_input = token.substr(0, second);
  auto signature = crypto::base64url_decode(token.substr(second + 1));
  if (!signature) throw malformed("signature is not base64url");
  if (!crypto::constant_time_equal(*signature, signature_for(signing_input, key))) {
    throw Error{Errc::token_bad_signature, "token signature does not verify"};
  }

  auto header_text = crypto::base64url_decode(token.substr(0, first));
  auto payload_text = crypto::base64url_decode(token.substr(first + 1, second - first - 1));
  if (!header_text || !payload_text) throw malformed("segment is not base64url");
  json header = json::parse(*header_text, nullptr, false);
  json payload = json::parse(*payload_text, nullptr, false);
  if (!header.is_object() || header.value("alg", "") != "HS256") {
    throw malformed("unsupported token header");
  }
  if (!payload.is_object()) throw malformed("payload is not a JSON object");

  try {
    TokenClaims claims;
    claims.principal = payload.at("sub").get<std::string>();
    claims.token_id = payload.at("jti").get<std::string>();
    claims.issued_at = Timestamp{std::chrono::seconds{payload.at("iat").get<long long>()}};
    claims.expires_at = Timestamp{std::chrono::seconds{payload.at("exp").get<long long>()}};
    auto kind = parse_token_kind(payload.at("knd").get<std::string>());
    if (!kind) throw malformed("unknown token kind");
    claims.kind = *kind;
    return claims;
  } catch (const json::exception&) {
    throw malformed("missing or mistyped claim");
  }
}

}  // namespace itt::identity
