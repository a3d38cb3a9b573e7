#include "itt/core/validation.hpp"

#include <algorithm>
#include <cctype>

namespace itt {

std::string trim(std::string_view text) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && is_space(text[begin])) ++begin;
  while (end > begin && is_space(text[end - 1])) --end;
  return std::string{text.substr(begin, end - begin)};
}

ValidationResult validate_log_submission(const LogSubmission& candidate, Timestamp now) {
  std::vector<FieldError> errors;
  LogDraft draft;

  auto required = [&](std::string_view field, const std::string& raw, std::string& out) {
    out = trim(raw);
    if (out.empty()) errors.push_back({std::string{field}, "must not be empty"});
  };
  required("owner", candidate.owner, draft.owner);
  required("consumer", candidate.consumer, draft.consumer);
  required("tool", candidate.tool, draft.tool);
  required("data_category", candidate.data_category, draft.data_category);
  draft.purpose = trim(candidate.purpose);

  if (auto ts = parse_timestamp(trim(candidate.occurred_at)); !ts) {
    errors.push_back({"occurred_at", "must be an RFC 3339 timestamp"});
  } else if (*ts > now + kClockSkewAllowance) {
    errors.push_back({"occurred_at", "lies more than 300 s in the future"});
  } else {
    draft.occurred_at = *ts;
  }

  std::string kind = trim(candidate.access_kind);
  std::transform(kind.begin(), kind.end(), kind.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (auto parsed = parse_access_kind(kind)) {
    draft.access_kind = *parsed;
  } else {
    errors.push_back({"access_kind", "must be one of read, aggregate, export, other"});
  }

  if (!errors.empty()) return errors;
  return draft;
}

LogSubmission to_submission(const LogDraft& draft) {
  return LogSubmission{format_timestamp(draft.occurred_at),
                       draft.owner,
                       draft.consumer,
                       draft.tool,
                       draft.data_category,
                       draft.purpose,
                       std::string{to_string(draft.access_kind)}};
}

}  // namespace itt
