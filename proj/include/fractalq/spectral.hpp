#pragma once

#include "fractalq/time_series.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace fractalq::spectral {

/// One-sided power spectral density with the DC bin removed.
/// freqs[k] = (k + 1) * fs / n, power in value^2 / Hz.
struct Spectrum {
  std::vector<double> freqs;
  std::vector<double> power;
  double fs = 0.0;
  std::size_t n = 0;

  std::size_t size() const { return freqs.size(); }
  /// Frequency resolution fs / n.
  double resolution() const { return fs / static_cast<double>(n); }
};

/// S(f) = |X(f)|^2 / (fs N) of the mean-removed series, interior bins
/// doubled (the Nyquist bin is not). Sum of power * fs/N equals the
/// population variance. Needs at least 16 contiguous samples.
Spectrum periodogram(const TimeSeries& x);

/// Welch average of Hann-windowed periodograms over segments of
/// `segment_length` samples with the given fractional overlap. Not the
/// default estimator: it smooths away the harmonic spikes.
Spectrum welch(const TimeSeries& x, std::size_t segment_length, double overlap = 0.5);

enum class Band { low_frequency, linear_decay, high_frequency };
std::string_view to_string(Band band);

/// Frequency interval [f_lo, f_hi] in Hz, both edges inclusive.
struct FrequencyBand {
  double f_lo = 0.0;
  double f_hi = 0.0;
};

/// Band from a pair of periods, e.g. (14 days, 32 minutes).
FrequencyBand band_from_periods(double long_period_seconds, double short_period_seconds);

inline constexpr double kDaySeconds = 86400.0;
inline constexpr double kDefaultLowCutoffPeriod = 14.0 * kDaySeconds;  // 14 days
inline constexpr double kDefaultHighCutoffPeriod = 32.0 * 60.0;        // 32 minutes
inline constexpr std::size_t kDefaultLowHarmonics = 6;

/// How the low-frequency region is delimited.
enum class LowPolicy {
  absolute_period,  // periods longer than low_cutoff_period
  harmonics,        // the first `low_harmonics` bins
};

struct BandPolicy {
  LowPolicy low = LowPolicy::absolute_period;
  double low_cutoff_period = kDefaultLowCutoffPeriod;
  std::size_t low_harmonics = kDefaultLowHarmonics;
  double high_cutoff_period = kDefaultHighCutoffPeriod;
  // Label every bin linear_decay (a custom band spanning the whole spectrum).
  bool full = false;
};

struct BandAnnotation {
  std::vector<Band> labels;  // one per spectrum bin
  // Half-open bin ranges [first, last) of each region.
  std::size_t low_end = 0;
  std::size_t high_begin = 0;
  FrequencyBand linear;  // edges of the linear-decay region

  std::size_t count(Band band) const;
};

/// Splits the spectrum into low-frequency / linear-decay / high-frequency
/// regions. With the absolute policy the record must be at least
/// low_cutoff_period long (DataError otherwise).
BandAnnotation segment_bands(const Spectrum& spectrum, double record_seconds,
                             const BandPolicy& policy = {});

enum class FitMethod { ols, lad };

struct BandFit {
  double beta = 0.0;  // negated log10-log10 slope
  double intercept = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
  double r_squared = 0.0;
  std::size_t n_bins = 0;
  std::size_t dropped_zero_bins = 0;
  FitMethod method = FitMethod::ols;
};

inline constexpr std::size_t kMinFitBins = 8;

/// Regresses log10 S on log10 f over bins with f in [f_lo, f_hi] and returns
/// beta = -slope. Zero-power bins are dropped and counted; fewer than 8
/// remaining bins is a DataError.
BandFit fit_beta(const Spectrum& spectrum, const FrequencyBand& band,
                 FitMethod method = FitMethod::ols);

/// Band spanning every bin of the spectrum.
FrequencyBand full_band(const Spectrum& spectrum);

} // namespace fractalq::spectral
