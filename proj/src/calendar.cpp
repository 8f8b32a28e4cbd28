#include "fractalq/calendar.hpp"

#include "fractalq/error.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace fractalq {

namespace {

constexpr std::int64_t kMsPerDay = 86'400'000;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

[[noreturn]] void bad_timestamp(std::string_view text, const char* why) {
  throw DataError("cannot parse timestamp '" + std::string(text) + "': " + why);
}

// Reads exactly `width` decimal digits at `pos`.
int read_digits(std::string_view text, std::size_t& pos, std::size_t width) {
  if (pos + width > text.size()) bad_timestamp(text, "truncated");
  int value = 0;
  for (std::size_t i = 0; i < width; ++i) {
    const char c = text[pos + i];
    if (c < '0' || c > '9') bad_timestamp(text, "expected digit");
    value = value * 10 + (c - '0');
  }
  pos += width;
  return value;
}

void expect_char(std::string_view text, std::size_t& pos, char c) {
  if (pos >= text.size() || text[pos] != c) bad_timestamp(text, "unexpected separator");
  ++pos;
}

// ISO dates always carry '-' at offset 4; anything else is tried as epoch seconds.
bool looks_numeric(std::string_view text) {
  return !(text.size() >= 10 && text[4] == '-');
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

} // namespace

std::string_view to_string(DayType type) {
  return type == DayType::weekend ? "weekend" : "weekday";
}

std::optional<DayType> parse_day_type(std::string_view text) {
  if (text == "weekday") return DayType::weekday;
  if (text == "weekend") return DayType::weekend;
  return std::nullopt;
}

WallClock WallClock::plus_seconds(double seconds) const {
  WallClock out = *this;
  out.utc_ms += std::llround(seconds * 1000.0);
  return out;
}

WallClock WallClock::at_index(std::size_t index, double dt_seconds) const {
  return plus_seconds(static_cast<double>(index) * dt_seconds);
}

int parse_utc_offset(std::string_view text) {
  text = trim(text);
  if (text == "Z" || text == "z") return 0;
  if (text.empty() || (text[0] != '+' && text[0] != '-')) {
    throw UsageError("UTC offset must look like +HH:MM, got '" + std::string(text) + "'");
  }
  const int sign = text[0] == '-' ? -1 : 1;
  std::size_t pos = 1;
  try {
    const int hours = read_digits(text, pos, 2);
    int minutes = 0;
    if (pos < text.size()) {
      if (text[pos] == ':') ++pos;
      minutes = read_digits(text, pos, 2);
    }
    if (pos != text.size() || hours > 18 || minutes > 59) throw DataError("range");
    return sign * (hours * 60 + minutes);
  } catch (const DataError&) {
    throw UsageError("invalid UTC offset '" + std::string(text) + "'");
  }
}

std::string format_utc_offset(int offset_minutes) {
  if (offset_minutes == 0) return "Z";
  const char sign = offset_minutes < 0 ? '-' : '+';
  const int magnitude = std::abs(offset_minutes);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%02d:%02d", sign, magnitude / 60, magnitude % 60);
  return buf;
}

WallClock parse_timestamp(std::string_view text, int default_offset_minutes) {
  text = trim(text);
  if (text.empty()) bad_timestamp(text, "empty");

  if (looks_numeric(text)) {
    double seconds = 0.0;
    const char* first = text.data() + (text.front() == '+' ? 1 : 0);
    const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), seconds);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(seconds)) {
      bad_timestamp(text, "bad epoch seconds");
    }
    return WallClock{std::llround(seconds * 1000.0), default_offset_minutes};
  }

  std::size_t pos = 0;
  const int year = read_digits(text, pos, 4);
  expect_char(text, pos, '-');
  const int month = read_digits(text, pos, 2);
  expect_char(text, pos, '-');
  const int day = read_digits(text, pos, 2);

  int hour = 0, minute = 0, second = 0, millis = 0;
  if (pos < text.size() && (text[pos] == 'T' || text[pos] == 't' || text[pos] == ' ')) {
    ++pos;
    hour = read_digits(text, pos, 2);
    expect_char(text, pos, ':');
    minute = read_digits(text, pos, 2);
    if (pos < text.size() && text[pos] == ':') {
      ++pos;
      second = read_digits(text, pos, 2);
      if (pos < text.size() && (text[pos] == '.' || text[pos] == ',')) {
        ++pos;
        // Up to millisecond precision; extra digits are truncated.
        int scale = 100;
        bool any = false;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
          millis += (text[pos] - '0') * scale;
          scale /= 10;
          any = true;
          ++pos;
        }
        if (!any) bad_timestamp(text, "empty fraction");
      }
    }
  }

  int offset = default_offset_minutes;
  if (pos < text.size()) {
    try {
      offset = parse_utc_offset(text.substr(pos));
    } catch (const UsageError&) {
      bad_timestamp(text, "bad UTC offset");
    }
  }

  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 60) bad_timestamp(text, "out of range");

  const std::int64_t days_since_epoch = sys_days{ymd}.time_since_epoch().count();
  const std::int64_t local_ms = days_since_epoch * kMsPerDay +
                                ((hour * 60 + minute) * 60 + second) * std::int64_t{1000} + millis;
  return WallClock{local_ms - std::int64_t{offset} * 60'000, offset};
}

std::int64_t local_day_number(const WallClock& instant) {
  return floor_div(instant.local_ms(), kMsPerDay);
}

std::string format_date(const WallClock& instant) {
  using namespace std::chrono;
  const year_month_day ymd{sys_days{days{local_day_number(instant)}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string format_timestamp(const WallClock& instant) {
  const std::int64_t local = instant.local_ms();
  const std::int64_t ms_of_day = local - local_day_number(instant) * kMsPerDay;
  const int hour = static_cast<int>(ms_of_day / 3'600'000);
  const int minute = static_cast<int>(ms_of_day / 60'000 % 60);
  const int second = static_cast<int>(ms_of_day / 1000 % 60);
  const int millis = static_cast<int>(ms_of_day % 1000);
  char buf[32];
  if (millis != 0) {
    std::snprintf(buf, sizeof buf, "T%02d:%02d:%02d.%03d", hour, minute, second, millis);
  } else {
    std::snprintf(buf, sizeof buf, "T%02d:%02d:%02d", hour, minute, second);
  }
  return format_date(instant) + buf + format_utc_offset(instant.offset_minutes);
}

unsigned local_weekday(const WallClock& instant) {
  using namespace std::chrono;
  return weekday{sys_days{days{local_day_number(instant)}}}.c_encoding();
}

DayType day_type_of(const WallClock& instant) {
  const unsigned wd = local_weekday(instant);
  return (wd == 0 || wd == 6) ? DayType::weekend : DayType::weekday;
}

DayType day_type(const WallClock& t0, std::size_t start_index, double dt_seconds) {
  return day_type_of(t0.at_index(start_index, dt_seconds));
}

} // namespace fractalq
