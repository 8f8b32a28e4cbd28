#pragma once

#include "fractalq/calendar.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fractalq {

/// A run of missing samples on the uniform sampling grid.
struct Gap {
  std::size_t start = 0;
  std::size_t length = 0;

  friend bool operator==(const Gap&, const Gap&) = default;
};

/// Uniformly sampled real-valued series.
///
/// Missing samples are stored as NaN and reported through gaps(); infinities
/// are rejected. A series that has passed through fill_gaps() is contiguous
/// (no NaN anywhere). Values are immutable after construction.
class TimeSeries {
public:
  TimeSeries(std::vector<double> values, double dt_seconds,
             std::optional<WallClock> t0 = std::nullopt, std::string label = {});

  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  double dt_seconds() const { return dt_; }
  double fs_hz() const { return 1.0 / dt_; }
  double duration_seconds() const { return dt_ * static_cast<double>(values_.size()); }

  const std::optional<WallClock>& t0() const { return t0_; }
  const std::string& label() const { return label_; }

  const std::vector<Gap>& gaps() const { return gaps_; }
  bool is_contiguous() const { return gaps_.empty(); }
  std::size_t missing_count() const;

  std::optional<WallClock> time_at(std::size_t index) const;

  /// Same metadata, new values (length may differ).
  TimeSeries with_values(std::vector<double> values) const;
  TimeSeries with_label(std::string label) const;

  /// Samples [start, start + length), with t0 advanced accordingly.
  TimeSeries slice(std::size_t start, std::size_t length) const;

  /// Throws DataError naming `what` unless the series has no gaps.
  void require_contiguous(const char* what) const;

private:
  std::vector<double> values_;
  double dt_;
  std::optional<WallClock> t0_;
  std::string label_;
  std::vector<Gap> gaps_;
};

/// Sub-range of the sampling grid: start_index and length in samples, with
/// the day type of the start instant when the series has a wall-clock anchor.
struct CalendarWindow {
  std::size_t start_index = 0;
  std::size_t length = 0;
  std::optional<DayType> day_type;
};

/// Builds a window over a series of `series_length` samples anchored at `t0`.
/// Throws UsageError when the window does not fit.
CalendarWindow make_window(std::size_t start_index, std::size_t length, std::size_t series_length,
                           const std::optional<WallClock>& t0, double dt_seconds);

/// A gap-split series: contiguous pieces in grid order. Offsets refer to the
/// original sampling grid so windowed analyses keep their time alignment.
class SegmentedSeries {
public:
  struct Segment {
    std::size_t offset = 0;
    TimeSeries series;

    std::size_t end() const { return offset + series.size(); }
  };

  SegmentedSeries(std::size_t total_length, double dt_seconds, std::optional<WallClock> t0,
                  std::string label, std::vector<Segment> segments);

  /// Wraps a contiguous series as a single segment.
  static SegmentedSeries whole(const TimeSeries& series);

  std::size_t total_length() const { return total_length_; }
  double dt_seconds() const { return dt_; }
  const std::optional<WallClock>& t0() const { return t0_; }
  const std::string& label() const { return label_; }
  const std::vector<Segment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }

  /// The segment holding [start, start + length) entirely, or nullptr.
  const Segment* find_segment(std::size_t start, std::size_t length) const;

  /// Samples [start, start + length) when they lie inside one segment.
  std::optional<TimeSeries> window_slice(std::size_t start, std::size_t length) const;

  const Segment& longest() const;

private:
  std::size_t total_length_;
  double dt_;
  std::optional<WallClock> t0_;
  std::string label_;
  std::vector<Segment> segments_;
};

} // namespace fractalq
