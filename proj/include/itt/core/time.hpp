#pragma once

#include <atomic>
#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace itt {

using Timestamp = std::chrono::sys_seconds;

inline constexpr std::chrono::seconds kClockSkewAllowance{300};

/// Parses RFC 3339 (`2024-05-01T12:00:00Z`, optional fraction, any numeric
/// offset) and normalizes to UTC, truncating to whole seconds.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Accepts only the canonical `YYYY-MM-DDTHH:MM:SSZ` form.
std::optional<Timestamp> parse_canonical_timestamp(std::string_view text);

std::string format_timestamp(Timestamp ts);

/// `YYYY-MM-DD` for a UTC calendar day.
std::string format_day(std::chrono::sys_days day);

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp now() const = 0;
};

class SystemClock final : public Clock {
 public:
  Timestamp now() const override {
    return std::chrono::time_point_cast<std::chrono::seconds>(
        std::chrono::system_clock::now());
  }
};

// Test clock; reads and writes are atomic so it can be shared across threads.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(Timestamp start) : seconds_(start.time_since_epoch().count()) {}

  Timestamp now() const override {
    return Timestamp{std::chrono::seconds{seconds_.load()}};
  }
  void set(Timestamp ts) { seconds_.store(ts.time_since_epoch().count()); }
  void advance(std::chrono::seconds by) { seconds_.fetch_add(by.count()); }

 private:
  std::atomic<long long> seconds_;
};

}  // namespace itt
