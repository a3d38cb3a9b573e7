#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "itt/core/model.hpp"

namespace itt::crypto {

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view data);
Digest hmac_sha256(std::string_view key, std::string_view message);

/// SHA-256(prev ‖ encoding): the log chain step.
Digest chain_step(const Digest& prev, std::string_view encoding);

std::string to_hex(std::span<const std::uint8_t> bytes);
std::optional<std::vector<std::uint8_t>> from_hex(std::string_view hex);
std::optional<Digest> digest_from_hex(std::string_view hex);

std::string base64url_encode(std::string_view bytes);
std::optional<std::string> base64url_decode(std::string_view text);

/// RFC 4648 standard alphabet with padding (HTTP Basic credentials).
std::string base64_encode(std::string_view bytes);
std::optional<std::string> base64_decode(std::string_view text);

std::string random_bytes(std::size_t count);
std::string uuid_v4();

bool constant_time_equal(std::string_view a, std::string_view b) noexcept;

}  // namespace itt::crypto
