#pragma once

#include "fractalq/error.hpp"
#include "fractalq/time_series.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

// Detrended fluctuation analysis.
//
// The series is integrated into its profile (cumulative sum of the
// mean-removed values), cut into non-overlapping segments of s samples from
// the front and again from the back, and each segment is detrended by a
// least-squares polynomial. F(s) is the RMS of the residuals pooled over
// both passes; alpha is the slope of log2 F(s) against log2 s.
namespace fractalq::dfa {

/// Cumulative sum of the mean-subtracted values; same length as the input.
std::vector<double> profile(std::span<const double> x);
std::vector<double> profile(const TimeSeries& x);

struct ScalingFit {
  double alpha = 0.0;
  double intercept = 0.0;  // log2 F at s = 1
  double r_squared = 0.0;
};

struct FluctuationCurve {
  std::vector<std::size_t> scales;    // strictly increasing, in samples
  std::vector<double> fluctuation;    // F(s) > 0
  std::vector<std::size_t> segments;  // segments pooled at each scale, 2 * floor(N / s)
  int detrend_order = 1;
  std::optional<ScalingFit> fit;      // filled by fit_alpha
};

/// Powers of two s = min_scale * 2^k up to max_scale inclusive.
std::vector<std::size_t> dyadic_scales(std::size_t min_scale, std::size_t max_scale);

/// F(s) at every scale. Scales must be strictly increasing with min scale
/// >= detrend_order + 2 (UsageError). A series shorter than 4 x max scale
/// or a constant series is a DataError.
///
/// Segmentation runs over the profile anchored at its zero origin, i.e. the
/// N + 1 points (0, y_0, ..., y_{N-1}); floor(N / s) segments are taken from
/// each end. Reversing the series maps this sequence onto its negated
/// mirror image, so F(s) and alpha are invariant under time reversal.
FluctuationCurve fluctuation(const TimeSeries& x, std::span<const std::size_t> scales,
                             int detrend_order = 1);
FluctuationCurve fluctuation(std::span<const double> x, std::span<const std::size_t> scales,
                             int detrend_order = 1);

/// OLS fit of log2 F on log2 s. Needs >= 4 scales and F(s) > 0 everywhere.
FluctuationCurve fit_alpha(FluctuationCurve curve);

struct GlobalOptions {
  std::size_t min_scale = 16;    // 2^4
  std::size_t max_scale = 8192;  // 2^13, series length >= 4 * max_scale
  int detrend_order = 1;
  // Scales must span at least 1.5 decades.
  bool require_span = true;
};

inline constexpr double kMinGlobalSpanDecades = 1.5;

/// profile -> fluctuation -> fit over dyadic scales.
FluctuationCurve dfa_global(const TimeSeries& x, const GlobalOptions& opts = {});

struct LocalOptions {
  std::size_t min_scale = 16;   // 2^4
  std::size_t max_scale = 256;  // 2^8; windows must hold >= 4 * max_scale samples
  int detrend_order = 1;
};

inline constexpr std::size_t kDefaultWindow = 1024;
inline constexpr std::size_t kDefaultStep = 15;

struct LocalAlpha {
  double alpha = 0.0;
  double r_squared = 0.0;
};

/// Local exponent over one window of a contiguous series.
LocalAlpha dfa_local(const TimeSeries& x, const CalendarWindow& window, const LocalOptions& opts = {});

/// Thrown when a window cannot be analysed (crosses a split, constant data).
class WindowSkipped : public DataError {
public:
  using DataError::DataError;
};

/// Local exponent over one window of a gap-split series; throws
/// WindowSkipped when the window crosses a split or is degenerate.
LocalAlpha dfa_local(const SegmentedSeries& x, const CalendarWindow& window,
                     const LocalOptions& opts = {});

struct TraceEntry {
  std::size_t start_index = 0;
  double alpha = 0.0;
  double r_squared = 0.0;
  std::optional<WallClock> start_time;
  std::optional<DayType> day_type;
};

struct SkippedWindow {
  std::size_t start_index = 0;
  std::string reason;
};

/// alpha(t): one local exponent per window start 0, step, 2 step, ...
struct ScalingTrace {
  std::size_t window_len = kDefaultWindow;
  std::size_t step = kDefaultStep;
  std::vector<TraceEntry> entries;   // ascending start_index
  std::vector<SkippedWindow> skipped;

  /// Number of window starts the grid admits: (N - window) / step + 1.
  std::size_t candidate_windows = 0;
};

struct TraceOptions {
  std::size_t window_len = kDefaultWindow;
  std::size_t step = kDefaultStep;
  LocalOptions local;
  // Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Sliding-window alpha(t). Windows overlapping a split are omitted and
/// listed in `skipped`; entries are always in start order. Throws DataError
/// when the series is shorter than one window.
ScalingTrace alpha_t(const SegmentedSeries& x, const TraceOptions& opts = {});
ScalingTrace alpha_t(const TimeSeries& x, const TraceOptions& opts = {});

} // namespace fractalq::dfa
