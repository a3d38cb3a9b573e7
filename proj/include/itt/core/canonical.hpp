#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "itt/core/model.hpp"

namespace itt {

inline constexpr std::array<std::string_view, 11> kCanonicalFieldNames = {
    "seq",   "entry_id",      "occurred_at", "recorded_at", "owner",      "consumer",
    "tool",  "data_category", "purpose",     "access_kind", "policy_flag"};

// Field values in canonical order, already rendered as text.
using CanonicalFields = std::array<std::string, kCanonicalFieldNames.size()>;

CanonicalFields canonical_fields(const UsageLogEntry& entry);

/// `name=value` lines joined by '\n'; backslash and newline in values are
/// escaped as `\\` and `\n`. chain_hash is not part of the encoding.
std::string canonical_encode(const CanonicalFields& fields);
std::string canonical_encode(const UsageLogEntry& entry);

/// Inverse of canonical_encode; nullopt when names are out of order or an
/// escape is malformed.
std::optional<CanonicalFields> canonical_decode(std::string_view bytes);

}  // namespace itt
