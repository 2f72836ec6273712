#include "spearsift/timeutil.hpp"

#include <array>
#include <cctype>
#include <cstdio>

namespace spearsift {

namespace {

using namespace std::chrono;

bool read_digits(std::string_view s, std::size_t& pos, std::size_t count, int& out) {
  if (pos + count > s.size()) return false;
  int v = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const char c = s[pos + i];
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    v = v * 10 + (c - '0');
  }
  pos += count;
  out = v;
  return true;
}

bool expect(std::string_view s, std::size_t& pos, char c) {
  if (pos < s.size() && s[pos] == c) {
    ++pos;
    return true;
  }
  return false;
}

std::optional<Timestamp> assemble(int y, int mo, int d, int h, int mi, int sec, int offset_minutes) {
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) return std::nullopt;
  Timestamp ts = sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
  return ts - minutes{offset_minutes};
}

// Parses "Z", "+HH:MM", "+HHMM", "+HH"; empty means UTC.
bool parse_offset(std::string_view s, std::size_t& pos, int& offset) {
  offset = 0;
  if (pos == s.size()) return true;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
    return true;
  }
  if (s[pos] != '+' && s[pos] != '-') return false;
  const int sign = s[pos] == '-' ? -1 : 1;
  ++pos;
  int hh = 0, mm = 0;
  if (!read_digits(s, pos, 2, hh)) return false;
  if (pos < s.size()) {
    expect(s, pos, ':');
    if (!read_digits(s, pos, 2, mm)) return false;
  }
  if (hh > 23 || mm > 59) return false;
  offset = sign * (hh * 60 + mm);
  return true;
}

}  // namespace

std::optional<Timestamp> parse_iso8601(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  std::size_t pos = 0;
  int y, mo, d, h = 0, mi = 0, sec = 0;
  if (!read_digits(s, pos, 4, y) || !expect(s, pos, '-') || !read_digits(s, pos, 2, mo) ||
      !expect(s, pos, '-') || !read_digits(s, pos, 2, d))
    return std::nullopt;
  if (pos < s.size()) {
    if (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' ') return std::nullopt;
    ++pos;
    if (!read_digits(s, pos, 2, h) || !expect(s, pos, ':') || !read_digits(s, pos, 2, mi))
      return std::nullopt;
    if (expect(s, pos, ':')) {
      if (!read_digits(s, pos, 2, sec)) return std::nullopt;
      if (expect(s, pos, '.') || expect(s, pos, ',')) {
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) return std::nullopt;
      }
    }
  }
  int offset = 0;
  if (!parse_offset(s, pos, offset) || pos != s.size()) return std::nullopt;
  return assemble(y, mo, d, h, mi, sec, offset);
}

std::string format_iso8601(Timestamp ts) {
  const auto days = floor<std::chrono::days>(ts);
  const year_month_day ymd{days};
  const hh_mm_ss hms{ts - days};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::optional<Timestamp> parse_rfc2822(std::string_view s) {
  static constexpr std::array<std::string_view, 12> kMonths = {
      "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"};
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };
  skip_ws();
  // Optional day-of-week.
  if (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) {
    while (pos < s.size() && s[pos] != ',') ++pos;
    if (pos == s.size()) return std::nullopt;
    ++pos;
  }
  skip_ws();
  int d = 0;
  std::size_t start = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) d = d * 10 + (s[pos++] - '0');
  if (pos == start) return std::nullopt;
  skip_ws();
  if (pos + 3 > s.size()) return std::nullopt;
  std::string mon;
  for (int i = 0; i < 3; ++i) mon += static_cast<char>(std::tolower(static_cast<unsigned char>(s[pos + i])));
  pos += 3;
  int mo = 0;
  for (std::size_t i = 0; i < kMonths.size(); ++i)
    if (kMonths[i] == mon) mo = static_cast<int>(i) + 1;
  if (mo == 0) return std::nullopt;
  while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
  skip_ws();
  int y = 0;
  start = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) y = y * 10 + (s[pos++] - '0');
  if (pos - start == 2) y += y < 50 ? 2000 : 1900;
  else if (pos - start != 4) return std::nullopt;
  skip_ws();
  int h = 0, mi = 0, sec = 0;
  if (!read_digits(s, pos, 2, h) || !expect(s, pos, ':') || !read_digits(s, pos, 2, mi))
    return std::nullopt;
  if (expect(s, pos, ':') && !read_digits(s, pos, 2, sec)) return std::nullopt;
  skip_ws();
  int offset = 0;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    const int sign = s[pos] == '-' ? -1 : 1;
    ++pos;
    int hh = 0, mm = 0;
    if (!read_digits(s, pos, 2, hh) || !read_digits(s, pos, 2, mm)) return std::nullopt;
    offset = sign * (hh * 60 + mm);
  }
  // Obsolete zone names (GMT, UT, EST, ...) are treated as UTC.
  return assemble(y, mo, d, h, mi, sec, offset);
}

std::string format_month(std::chrono::year_month ym) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(ym.year()), static_cast<unsigned>(ym.month()));
  return buf;
}

}  // namespace spearsift
