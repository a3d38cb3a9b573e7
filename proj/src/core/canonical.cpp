#include "itt/core/canonical.hpp"

#include "itt/core/crypto.hpp"

namespace itt {

CanonicalFields canonical_fields(const UsageLogEntry& entry) {
  return {std::to_string(entry.seq),
          entry.entry_id,
          format_timestamp(entry.occurred_at),
          format_timestamp(entry.recorded_at),
          entry.owner,
          entry.consumer,
          entry.tool,
          entry.data_category,
          entry.purpose,
          std::string{to_string(entry.access_kind)},
          std::string{to_string(entry.policy_flag)}};
}

std::string canonical_encode(const CanonicalFields& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out.append(kCanonicalFieldNames[i]);
    out.push_back('=');
    for (char c : fields[i]) {
      if (c == '\\') {
        out.append("\\\\");
      } else if (c == '\n') {
        out.append("\\n");
      } else {
        out.push_back(c);
      }
    }
  }
  return out;
}

std::string canonical_encode(const UsageLogEntry& entry) {
  return canonical_encode(canonical_fields(entry));
}

std::optional<CanonicalFields> canonical_decode(std::string_view bytes) {
  CanonicalFields fields;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    std::size_t end = bytes.find('\n', pos);
    bool last = i + 1 == fields.size();
    if (last != (end == std::string_view::npos)) return std::nullopt;
    std::string_view line = bytes.substr(pos, last ? std::string_view::npos : end - pos);
    std::string_view name = kCanonicalFieldNames[i];
    if (line.size() <= name.size() || line.substr(0, name.size()) != name ||
        line[name.size()] != '=') {
      return std::nullopt;
    }
    std::string_view value = line.substr(name.size() + 1);
    std::string& out = fields[i];
    for (std::size_t k = 0; k < value.size(); ++k) {
      if (value[k] != '\\') {
        out.push_back(value[k]);
        continue;
      }
      if (++k == value.size()) return std::nullopt;
      if (value[k] == '\\') {
        out.push_back('\\');
      } else if (value[k] == 'n') {
        out.push_back('\n');
      } else {
        return std::nullopt;
      }
    }
    pos = end + 1;
  }
  return fields;
}

}  // namespace itt
