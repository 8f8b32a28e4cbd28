#include "fractalq/time_series.hpp"

#include "fractalq/error.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace fractalq {

TimeSeries::TimeSeries(std::vector<double> values, double dt_seconds, std::optional<WallClock> t0,
                       std::string label)
    : values_(std::move(values)), dt_(dt_seconds), t0_(t0), label_(std::move(label)) {
  if (values_.empty()) throw DataError("time series must not be empty");
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw UsageError("sampling interval must be positive");

  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (std::isnan(v)) {
      if (!gaps_.empty() && gaps_.back().start + gaps_.back().length == i) {
        ++gaps_.back().length;
      } else {
        gaps_.push_back({i, 1});
      }
    } else if (std::isinf(v)) {
      throw DataError("time series value at index " + std::to_string(i) + " is infinite");
    }
  }
}

std::size_t TimeSeries::missing_count() const {
  std::size_t n = 0;
  for (const auto& g : gaps_) n += g.length;
  return n;
}

std::optional<WallClock> TimeSeries::time_at(std::size_t index) const {
  if (!t0_) return std::nullopt;
  return t0_->at_index(index, dt_);
}

TimeSeries TimeSeries::with_values(std::vector<double> values) const {
  return TimeSeries(std::move(values), dt_, t0_, label_);
}

TimeSeries TimeSeries::with_label(std::string label) const {
  return TimeSeries(values_, dt_, t0_, std::move(label));
}

TimeSeries TimeSeries::slice(std::size_t start, std::size_t length) const {
  if (length == 0 || start > values_.size() || length > values_.size() - start) {
    throw UsageError("slice [" + std::to_string(start) + ", +" + std::to_string(length) +
                     ") outside series of length " + std::to_string(values_.size()));
  }
  std::vector<double> part(values_.begin() + static_cast<std::ptrdiff_t>(start),
                           values_.begin() + static_cast<std::ptrdiff_t>(start + length));
  return TimeSeries(std::move(part), dt_, time_at(start), label_);
}

void TimeSeries::require_contiguous(const char* what) const {
  if (!gaps_.empty()) {
    throw DataError(std::string(what) + " requires a contiguous series; found " +
                    std::to_string(gaps_.size()) + " gap(s) (run fill_gaps first)");
  }
}

CalendarWindow make_window(std::size_t start_index, std::size_t length, std::size_t series_length,
                           const std::optional<WallClock>& t0, double dt_seconds) {
  if (length == 0 || start_index > series_length || length > series_length - start_index) {
    throw UsageError("window [" + std::to_string(start_index) + ", +" + std::to_string(length) +
                     ") does not fit a series of " + std::to_string(series_length) + " samples");
  }
  CalendarWindow w{start_index, length, std::nullopt};
  if (t0) w.day_type = day_type(*t0, start_index, dt_seconds);
  return w;
}

SegmentedSeries::SegmentedSeries(std::size_t total_length, double dt_seconds,
                                 std::optional<WallClock> t0, std::string label,
                                 std::vector<Segment> segments)
    : total_length_(total_length), dt_(dt_seconds), t0_(t0), label_(std::move(label)),
      segments_(std::move(segments)) {
  std::size_t cursor = 0;
  for (const auto& seg : segments_) {
    if (seg.offset < cursor || seg.end() > total_length_) {
      throw UsageError("segments must be ordered, disjoint and inside the grid");
    }
    seg.series.require_contiguous("a segment");
    cursor = seg.end();
  }
}

SegmentedSeries SegmentedSeries::whole(const TimeSeries& series) {
  series.require_contiguous("analysis");
  return SegmentedSeries(series.size(), series.dt_seconds(), series.t0(), series.label(),
                         {Segment{0, series}});
}

const SegmentedSeries::Segment* SegmentedSeries::find_segment(std::size_t start,
                                                              std::size_t length) const {
  for (const auto& seg : segments_) {
    if (start >= seg.offset && start + length <= seg.end()) return &seg;
  }
  return nullptr;
}

std::optional<TimeSeries> SegmentedSeries::window_slice(std::size_t start, std::size_t length) const {
  const Segment* seg = find_segment(start, length);
  if (seg == nullptr) return std::nullopt;
  return seg->series.slice(start - seg->offset, length);
}

const SegmentedSeries::Segment& SegmentedSeries::longest() const {
  if (segments_.empty()) throw DataError("series has no contiguous data");
  return *std::max_element(segments_.begin(), segments_.end(), [](const auto& a, const auto& b) {
    return a.series.size() < b.series.size();
  });
}

} // namespace fractalq
