#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fractalq {

enum class DayType { weekday, weekend };

std::string_view to_string(DayType type);
std::optional<DayType> parse_day_type(std::string_view text);

/// An instant on the UTC time line plus the fixed UTC offset used to
/// interpret it as local wall-clock time. No DST rules are applied.
struct WallClock {
  std::int64_t utc_ms = 0;
  int offset_minutes = 0;

  std::int64_t local_ms() const { return utc_ms + std::int64_t{offset_minutes} * 60'000; }

  /// Instant shifted by `seconds`, rounded to the millisecond.
  WallClock plus_seconds(double seconds) const;

  /// Instant of sample `index` on a uniform grid anchored here.
  WallClock at_index(std::size_t index, double dt_seconds) const;

  friend bool operator==(const WallClock&, const WallClock&) = default;
};

/// Parses ISO-8601 ("2018-01-01T07:00:00Z", "2018-01-01 07:00:00+05:30",
/// "2018-01-01T07:00", "2018-01-01") or epoch seconds ("1514790000",
/// "1514790000.25"). Timestamps without an explicit offset are read as local
/// time at `default_offset_minutes`. Throws DataError on malformed input.
WallClock parse_timestamp(std::string_view text, int default_offset_minutes = 0);

/// "+HH:MM", "-HH:MM", "+HHMM", "+HH" or "Z" -> minutes east of UTC.
int parse_utc_offset(std::string_view text);
std::string format_utc_offset(int offset_minutes);

/// ISO-8601 local time with offset; milliseconds only when nonzero.
/// parse_timestamp(format_timestamp(t)) == t.
std::string format_timestamp(const WallClock& instant);

/// Local civil date "YYYY-MM-DD".
std::string format_date(const WallClock& instant);

/// Days since 1970-01-01 of the local civil date.
std::int64_t local_day_number(const WallClock& instant);

/// Local day of week, 0 = Sunday ... 6 = Saturday.
unsigned local_weekday(const WallClock& instant);

/// Saturday and Sunday (local) are weekend days.
DayType day_type_of(const WallClock& instant);

/// Day type of the window starting at sample `start_index` of a series
/// anchored at `t0`.
DayType day_type(const WallClock& t0, std::size_t start_index, double dt_seconds);

} // namespace fractalq
