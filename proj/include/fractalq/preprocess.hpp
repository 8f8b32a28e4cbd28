#pragma once

#include "fractalq/time_series.hpp"

#include <cstddef>
#include <vector>

namespace fractalq {

struct HampelOptions {
  std::size_t half_width = 15;  // 30 min at 2-minute sampling
  double n_sigmas = 3.0;
  // Repeat the single pass until nothing changes (bounded by max_passes).
  bool until_stable = false;
  std::size_t max_passes = 100;
};

/// Scale factor turning the MAD into a Gaussian standard deviation.
inline constexpr double kMadToSigma = 1.4826;

/// Indices whose distance from the rolling median exceeds
/// n_sigmas * 1.4826 * MAD. Windows are centered and truncated at the edges;
/// NaN samples are ignored and never flagged.
std::vector<std::size_t> hampel_outliers(const TimeSeries& x, const HampelOptions& opts = {});

/// Replaces every flagged sample by its rolling median; everything else is
/// copied unchanged. When all values in a window are equal the MAD is zero
/// and any sample off that median is replaced.
TimeSeries hampel_filter(const TimeSeries& x, const HampelOptions& opts = {});

/// Interpolates gaps of at most `max_gap` samples linearly and splits the
/// series at longer gaps. Leading and trailing gaps cannot be interpolated
/// and are dropped. An all-missing series yields no segments.
SegmentedSeries fill_gaps(const TimeSeries& x, std::size_t max_gap = 15);

} // namespace fractalq
