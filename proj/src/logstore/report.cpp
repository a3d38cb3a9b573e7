#include "itt/logstore/report.hpp"

#include <cctype>

namespace itt::logstore {
namespace {

std::string compact(Timestamp ts) {
  std::string out;
  for (char c : format_timestamp(ts)) {
    if (c != '-' && c != ':') out.push_back(c);
  }
  return out;
}

constexpr std::string_view kStyle = R"css(
body { font-family: "Helvetica Neue", Arial, sans-serif; color: #222; margin: 2em; }
h1 { font-size: 1.5em; margin-bottom: 0.2em; }
h2 { font-size: 1.15em; margin-top: 1.6em; border-bottom: 1px solid #bbb; }
table { border-collapse: collapse; width: 100%; font-size: 0.85em; }
th, td { border: 1px solid #ccc; padding: 0.3em 0.5em; text-align: left; vertical-align: top; }
th { background: #f0f0f0; }
td.num { text-align: right; }
.meta { color: #555; }
.violation { color: #a00; font-weight: bold; }
.empty { color: #777; font-style: italic; }
@media print { body { margin: 0; } h2 { page-break-after: avoid; } tr { page-break-inside: avoid; } }
)css";

void count_table(std::string& out, std::string_view heading, std::string_view key_label,
                 const std::map<std::string, std::int64_t>& counts) {
  out += "<h2>";
  out += heading;
  out += "</h2>\n";
  if (counts.empty()) {
    out += "<p class=\"empty\">No usages.</p>\n";
    return;
  }
  out += "<table><thead><tr><th>";
  out += key_label;
  out += "</th><th>Usages</th></tr></thead><tbody>\n";
  for (const auto& [key, n] : counts) {
    out += "<tr><td>" + html_escape(key) + "</td><td class=\"num\">" + std::to_string(n) +
           "</td></tr>\n";
  }
  out += "</tbody></table>\n";
}

}  // namespace

std::string html_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string report_filename(const std::string& owner, Timestamp from, Timestamp to) {
  std::string safe;
  for (unsigned char c : owner) {
    bool keep = std::isalnum(c) != 0 || c == '.' || c == '-' || c == '@';
    safe.push_back(keep ? static_cast<char>(c) : '_');
  }
  return "usage-report_" + safe + "_" + compact(from) + "_" + compact(to) + ".html";
}

std::string render_report_html(const std::string& owner, Timestamp from, Timestamp to,
                               const UsageSummary& summary,
                               const std::vector<UsageLogEntry>& entries) {
  const std::string owner_html = html_escape(owner);
  const std::string from_text = format_timestamp(from);
  const std::string to_text = format_timestamp(to);

  std::string out;
  out += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
  out += "<title>Data usage report for " + owner_html + "</title>\n";
  out += "<style>";
  out += kStyle;
  out += "</style>\n</head>\n<body>\n";
  out += "<h1>Data usage report</h1>\n";
  out += "<p class=\"meta\">Data owner: <strong>" + owner_html + "</strong><br>\n";
  out += "Period: " + from_text + " (inclusive) to " + to_text + " (exclusive)</p>\n";

  out += "<h2>Summary</h2>\n<table><tbody>\n";
  out += "<tr><th>Total usages</th><td class=\"num\" id=\"total\">" +
         std::to_string(summary.total) + "</td></tr>\n";
  out += "<tr><th>Distinct consumers</th><td class=\"num\">" +
         std::to_string(summary.by_consumer.size()) + "</td></tr>\n";
  out += "<tr><th>Distinct tools</th><td class=\"num\">" +
         std::to_string(summary.by_tool.size()) + "</td></tr>\n";
  out += "</tbody></table>\n";

  count_table(out, "Usages by consumer", "Consumer", summary.by_consumer);
  count_table(out, "Usages by tool", "Tool", summary.by_tool);

  out += "<h2>Usages by day (UTC)</h2>\n";
  out += "<table><thead><tr><th>Day</th><th>Usages</th></tr></thead><tbody>\n";
  for (const auto& d : summary.by_day) {
    out += "<tr><td>" + d.day + "</td><td class=\"num\">" + std::to_string(d.count) +
           "</td></tr>\n";
  }
  out += "</tbody></table>\n";

  out += "<h2>All usages</h2>\n";
  if (entries.empty()) {
    out += "<p class=\"empty\">No usages were logged in this period.</p>\n";
  } else {
    out += "<table id=\"entries\"><thead><tr><th>#</th><th>Occurred (UTC)</th><th>Consumer</th>"
           "<th>Tool</th><th>Category</th><th>Purpose</th><th>Access</th><th>Policy</th>"
           "</tr></thead><tbody>\n";
    for (const auto& e : entries) {
      bool violation = e.policy_flag == PolicyFlag::Violation;
      out += "<tr><td class=\"num\">" + std::to_string(e.seq) + "</td><td>" +
             format_timestamp(e.occurred_at) + "</td><td>" + html_escape(e.consumer) +
             "</td><td>" + html_escape(e.tool) + "</td><td>" + html_escape(e.data_category) +
             "</td><td>" + html_escape(e.purpose) + "</td><td>" +
             std::string{to_string(e.access_kind)} + "</td><td" +
             (violation ? " class=\"violation\">violation" : ">none") + "</td></tr>\n";
    }
    out += "</tbody></table>\n";
  }
  out += "</body>\n</html>\n";
  return out;
}

}  // namespace itt::logstore
