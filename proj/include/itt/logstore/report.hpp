#pragma once

#include <string>
#include <vector>

#include "itt/core/model.hpp"

namespace itt::logstore {

std::string report_filename(const std::string& owner, Timestamp from, Timestamp to);

/// Self-contained printable HTML: inline styles, no scripts, no external
/// resources. Output depends only on the arguments.
std::string render_report_html(const std::string& owner, Timestamp from, Timestamp to,
                               const UsageSummary& summary,
                               const std::vector<UsageLogEntry>& entries);

std::string html_escape(std::string_view text);

}  // namespace itt::logstore
