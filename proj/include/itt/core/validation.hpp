#pragma once

#include <string>
#include <variant>
#include <vector>

#include "itt/core/model.hpp"

namespace itt {

struct FieldError {
  std::string field;
  std::string message;

  friend bool operator==(const FieldError&, const FieldError&) = default;
};

using ValidationResult = std::variant<LogDraft, std::vector<FieldError>>;

/// Checks every field and reports all problems at once. `now` is the
/// recording clock used for the skew check on occurred_at.
ValidationResult validate_log_submission(const LogSubmission& candidate, Timestamp now);

/// Back to raw form, so a draft can be fed through validation again.
LogSubmission to_submission(const LogDraft& draft);

std::string trim(std::string_view text);

}  // namespace itt
