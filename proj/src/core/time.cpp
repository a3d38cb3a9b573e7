#include "itt/core/time.hpp"

#include <cstdio>

namespace itt {
namespace {

using namespace std::chrono;

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool digits(int count, int& out) {
    if (pos_ + static_cast<std::size_t>(count) > text_.size()) return false;
    int value = 0;
    for (int i = 0; i < count; ++i) {
      char c = text_[pos_ + i];
      if (c < '0' || c > '9') return false;
      value = value * 10 + (c - '0');
    }
    pos_ += count;
    out = value;
    return true;
  }

  bool literal(char expected) {
    if (pos_ >= text_.size() || text_[pos_] != expected) return false;
    ++pos_;
    return true;
  }

  bool one_of(std::string_view set, char& out) {
    if (pos_ >= text_.size() || set.find(text_[pos_]) == std::string_view::npos) return false;
    out = text_[pos_++];
    return true;
  }

  void skip_digits() {
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
  }

  bool at_end() const { return pos_ == text_.size(); }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::optional<Timestamp> compose(int y, int mo, int d, int h, int mi, int s) {
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  Cursor c{text};
  int y, mo, d, h, mi, s;
  char sep;
  if (!c.digits(4, y) || !c.literal('-') || !c.digits(2, mo) || !c.literal('-') ||
      !c.digits(2, d) || !c.one_of("Tt", sep) || !c.digits(2, h) || !c.literal(':') ||
      !c.digits(2, mi) || !c.literal(':') || !c.digits(2, s)) {
    return std::nullopt;
  }
  if (c.literal('.')) {
    std::size_t before = c.pos();
    c.skip_digits();
    if (c.pos() == before) return std::nullopt;
  }
  seconds offset{0};
  char zone;
  if (!c.one_of("Zz+-", zone)) return std::nullopt;
  if (zone == '+' || zone == '-') {
    int oh, om;
    if (!c.digits(2, oh) || !c.literal(':') || !c.digits(2, om) || oh > 23 || om > 59) {
      return std::nullopt;
    }
    offset = hours{oh} + minutes{om};
    if (zone == '-') offset = -offset;
  }
  if (!c.at_end()) return std::nullopt;
  auto local = compose(y, mo, d, h, mi, s);
  if (!local) return std::nullopt;
  return *local - offset;
}

std::optional<Timestamp> parse_canonical_timestamp(std::string_view text) {
  if (text.size() != 20 || text[10] != 'T' || text[19] != 'Z') return std::nullopt;
  auto ts = parse_timestamp(text);
  if (!ts || format_timestamp(*ts) != text) return std::nullopt;
  return ts;
}

std::string format_timestamp(Timestamp ts) {
  auto day = floor<days>(ts);
  year_month_day ymd{day};
  hh_mm_ss hms{ts - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::string format_day(sys_days day) {
  year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace itt
