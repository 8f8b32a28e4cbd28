#pragma once

#include "fractalq/dfa.hpp"
#include "fractalq/time_series.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fractalq::traffic {

inline constexpr double kDailyThresholdFraction = 0.6;
inline constexpr double kTraceThresholdFraction = 0.5;

struct CongestionConfig {
  double capacity = 40.0;  // same units as the queue series
  double threshold_fraction = kDailyThresholdFraction;

  double threshold() const { return threshold_fraction * capacity; }
  /// capacity > 0 and threshold_fraction in (0, 1), else UsageError.
  void validate() const;
};

/// Q: number of samples in the window strictly above threshold_fraction *
/// capacity. Missing (NaN) samples never count.
std::size_t congestion_q(std::span<const double> window_values, const CongestionConfig& cfg);
std::size_t congestion_q(const TimeSeries& x, const CalendarWindow& window, const CongestionConfig& cfg);

struct DailyOptions {
  int anchor_minutes = 7 * 60;  // local 07:00
  std::size_t window_len = dfa::kDefaultWindow;
  dfa::LocalOptions local;
};

struct DailyPair {
  std::string date;  // local date of the window start
  CalendarWindow window;
  double alpha = 0.0;
  double r_squared = 0.0;
  std::size_t q = 0;
};

struct SkippedDay {
  std::string date;
  std::size_t start_index = 0;
  std::string reason;
};

struct DailyAnalysis {
  std::vector<DailyPair> pairs;
  std::vector<SkippedDay> skipped;
};

/// One window per local calendar day starting at the first sample at or
/// after the anchor time; alpha (dfa_local) and Q are computed over the same
/// samples. Days whose window runs past the end of the record are not
/// candidates; windows crossing a split are skipped and reported. Throws
/// DataError when the series has no wall-clock anchor.
DailyAnalysis daily_pairs(const SegmentedSeries& x, const CongestionConfig& cfg,
                          const DailyOptions& opts = {});
DailyAnalysis daily_pairs(const TimeSeries& x, const CongestionConfig& cfg,
                          const DailyOptions& opts = {});

struct CorrelationPair {
  std::size_t window_start = 0;
  double alpha = 0.0;
  double q = 0.0;
  DayType day_type = DayType::weekday;
  std::string date;
};

std::vector<CorrelationPair> to_correlation_pairs(const DailyAnalysis& daily);

struct CorrelationReport {
  // nullopt = undefined (fewer than 3 pairs or zero variance).
  std::optional<double> r_all;
  std::optional<double> r_weekday;
  std::optional<double> r_weekend;
  std::size_t n_all = 0;
  std::size_t n_weekday = 0;
  std::size_t n_weekend = 0;
  std::vector<CorrelationPair> pairs;
};

inline constexpr std::size_t kMinCorrelationPairs = 3;

/// Pearson r of (alpha, q) overall and per day type. Fewer than 3 pairs
/// overall is a DataError; undefined subsets are reported, never thrown.
CorrelationReport correlate(std::span<const CorrelationPair> pairs);

struct WkCheck {
  double beta = 0.0;
  double alpha = 0.0;
  double beta_tilde = 0.0;  // 2 alpha - 1
  double abs_diff = 0.0;
  std::optional<double> rel_diff_pct;  // undefined when beta == 0
};

/// Compares a spectral exponent with the one implied by a DFA exponent.
WkCheck wk_check(double beta, double alpha);

/// Q of every trace window.
std::vector<std::size_t> q_trace(const SegmentedSeries& x, const dfa::ScalingTrace& trace,
                                 const CongestionConfig& cfg);

struct DayTypeStats {
  std::size_t n = 0;
  double alpha_mean = 0.0;
  double alpha_std = 0.0;
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  std::optional<double> q_mean;
};

inline constexpr double kBrownianLow = 1.0;
inline constexpr double kBrownianHigh = 1.3;

struct TraceSummary {
  DayTypeStats all;
  DayTypeStats weekday;
  DayTypeStats weekend;
  double fraction_above_one = 0.0;  // alpha > 1
  double brownian_fraction = 0.0;   // alpha in [1.0, 1.3]
};

/// Descriptive statistics of an alpha(t) trace, split by day type when the
/// entries carry one. `q` is optional (empty) or one value per entry.
TraceSummary classify_trace(const dfa::ScalingTrace& trace, std::span<const std::size_t> q = {});

} // namespace fractalq::traffic
