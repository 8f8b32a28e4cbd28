#include "fractalq/preprocess.hpp"

#include "fractalq/error.hpp"
#include "fractalq/stats.hpp"

#include <algorithm>
#include <cmath>

namespace fractalq {

namespace {

void check(const TimeSeries& x, const HampelOptions& opts) {
  if (opts.half_width < 1) throw UsageError("Hampel half-width must be at least 1");
  if (!(opts.n_sigmas > 0.0)) throw UsageError("Hampel n_sigmas must be positive");
  if (x.size() <= 2 * opts.half_width) {
    throw DataError("series of " + std::to_string(x.size()) +
                    " samples is too short for a Hampel window of half-width " +
                    std::to_string(opts.half_width));
  }
}

// One pass: flags and the rolling median at each flagged index.
std::vector<std::pair<std::size_t, double>> single_pass(std::span<const double> v,
                                                        const HampelOptions& opts) {
  std::vector<std::pair<std::size_t, double>> flagged;
  std::vector<double> window;
  window.reserve(2 * opts.half_width + 1);
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(v[i])) continue;
    const std::size_t lo = i >= opts.half_width ? i - opts.half_width : 0;
    const std::size_t hi = std::min(n, i + opts.half_width + 1);
    window.clear();
    for (std::size_t j = lo; j < hi; ++j) {
      if (!std::isnan(v[j])) window.push_back(v[j]);
    }
    const double med = median(window);
    for (double& w : window) w = std::abs(w - med);
    const double mad = median(window);
    if (std::abs(v[i] - med) > opts.n_sigmas * kMadToSigma * mad) flagged.emplace_back(i, med);
  }
  return flagged;
}

} // namespace

std::vector<std::size_t> hampel_outliers(const TimeSeries& x, const HampelOptions& opts) {
  check(x, opts);
  std::vector<std::size_t> idx;
  for (const auto& [i, med] : single_pass(x.values(), opts)) idx.push_back(i);
  return idx;
}

TimeSeries hampel_filter(const TimeSeries& x, const HampelOptions& opts) {
  check(x, opts);
  std::vector<double> v(x.values().begin(), x.values().end());
  const std::size_t passes = opts.until_stable ? std::max<std::size_t>(opts.max_passes, 1) : 1;
  for (std::size_t p = 0; p < passes; ++p) {
    const auto flagged = single_pass(v, opts);
    if (flagged.empty()) break;
    for (const auto& [i, med] : flagged) v[i] = med;
  }
  return x.with_values(std::move(v));
}

SegmentedSeries fill_gaps(const TimeSeries& x, std::size_t max_gap) {
  std::vector<double> v(x.values().begin(), x.values().end());
  const std::size_t n = v.size();

  std::vector<std::pair<std::size_t, std::size_t>> pieces;  // [begin, end)
  std::size_t begin = n;  // start of the current piece, n = none open
  std::size_t i = 0;
  while (i < n) {
    if (!std::isnan(v[i])) {
      if (begin == n) begin = i;
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && std::isnan(v[j])) ++j;
    const std::size_t len = j - i;
    const bool interior = begin != n && j < n;
    if (interior && len <= max_gap) {
      const double a = v[i - 1];
      const double b = v[j];
      const double span = static_cast<double>(len + 1);
      for (std::size_t k = i; k < j; ++k) {
        v[k] = a + (b - a) * static_cast<double>(k - i + 1) / span;
      }
    } else if (begin != n) {
      pieces.emplace_back(begin, i);
      begin = n;
    }
    i = j;
  }
  if (begin != n) pieces.emplace_back(begin, n);

  std::vector<SegmentedSeries::Segment> segments;
  segments.reserve(pieces.size());
  for (const auto& [b, e] : pieces) {
    std::vector<double> part(v.begin() + static_cast<std::ptrdiff_t>(b),
                             v.begin() + static_cast<std::ptrdiff_t>(e));
    segments.push_back({b, TimeSeries(std::move(part), x.dt_seconds(), x.time_at(b), x.label())});
  }
  return SegmentedSeries(n, x.dt_seconds(), x.t0(), x.label(), std::move(segments));
}

} // namespace fractalq
