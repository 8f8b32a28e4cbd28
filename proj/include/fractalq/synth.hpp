#pragma once

#include "fractalq/kv.hpp"
#include "fractalq/time_series.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

// Synthetic signals with known spectral and scaling exponents. They are the
// ground truth the estimators are tested against, so every generator is
// deterministic for a given spec (seed included).
namespace fractalq::synth {

enum class NoiseKind { white, powerlaw, fgn, fbm };

std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view text);

struct NoiseSpec {
  NoiseKind kind = NoiseKind::white;
  double beta = 1.0;   // powerlaw only, in [0, 2]
  double hurst = 0.5;  // fgn / fbm only, in (0, 1)
  std::size_t length = std::size_t{1} << 15;
  std::uint64_t seed = 0;
  double amplitude = 1.0;  // standard deviation of the noise (of the increments for fbm)
  double dt_seconds = 120.0;
  std::optional<WallClock> t0;
  std::string label;

  /// Throws UsageError for out-of-range parameters.
  void validate() const;
};

/// Keys: kind, beta, hurst, length, seed, amplitude, dt, t0 (ISO-8601 or
/// "none"), label. Missing keys keep their defaults.
NoiseSpec noise_spec_from_kv(const KeyValues& kv);
KeyValues to_kv(const NoiseSpec& spec);

/// i.i.d. Gaussian samples times amplitude.
TimeSeries gen_white(const NoiseSpec& spec);

/// Exact fractional Gaussian noise by circulant embedding (Davies-Harte).
TimeSeries gen_fgn(const NoiseSpec& spec);

/// Fractional Brownian motion: fbm[0] = 0 and fbm[i] = fbm[i-1] + fgn[i-1],
/// where fgn = gen_fgn(spec). Differencing returns the first length-1
/// samples of that fGn.
TimeSeries gen_fbm(const NoiseSpec& spec);

/// Spectral synthesis: complex Gaussian Fourier coefficients shaped by
/// f^(-beta/2), inverse transformed, mean removed and scaled to standard
/// deviation = amplitude.
TimeSeries gen_powerlaw(const NoiseSpec& spec);

/// Dispatches on spec.kind.
TimeSeries generate(const NoiseSpec& spec);

/// Autocovariance of unit-variance fGn at integer lag k.
double fgn_autocovariance(std::size_t k, double hurst);

/// Unit-variance fGn samples drawn from `seed`.
std::vector<double> fgn_samples(std::size_t n, double hurst, std::uint64_t seed);

// Two Gaussian rush-hour peaks on top of a base level, in queue units.
struct DemandProfile {
  double base = 6.0;
  double morning_peak_hour = 8.0;
  double evening_peak_hour = 17.5;
  double morning_amplitude = 24.0;
  double evening_amplitude = 26.0;
  double peak_width_hours = 1.5;  // Gaussian standard deviation
  double weekend_factor = 0.5;    // weekend peak amplitude relative to weekday

  /// Demand at local hour-of-day `hour` on a day of the given type.
  double at(double hour, DayType day) const;
  /// Largest weekday demand (both peaks evaluated on their own centres).
  double weekday_peak() const;
};

struct CorridorSpec {
  std::size_t n_days = 28;
  double dt_seconds = 120.0;
  double capacity = 40.0;
  std::size_t n_intersections = 3;
  std::uint64_t seed = 0;
  // Monday 2018-01-01 00:00 local, Eastern Standard Time.
  WallClock start{1514782800000, -300};
  DemandProfile demand;
  // Noise standard deviation is amplitude * (floor + (1 - floor) * D / D_peak).
  double noise_hurst = 0.8;
  double noise_amplitude = 6.0;
  double noise_floor = 0.5;
  std::string label_prefix = "intersection-";

  void validate() const;
  std::size_t samples() const;
};

/// Keys: days, dt, capacity, intersections, seed, start, base, morning_peak,
/// evening_peak, morning_amplitude, evening_amplitude, peak_width,
/// weekend_factor, noise_hurst, noise_amplitude, noise_floor, label_prefix.
CorridorSpec corridor_spec_from_kv(const KeyValues& kv);
KeyValues to_kv(const CorridorSpec& spec);

/// Deterministic part of the queue: the demand profile clipped to capacity.
std::vector<double> corridor_profile(const CorridorSpec& spec);

/// One queue-length series per intersection: clip(D + modulated fGn, 0,
/// capacity), wall-clock anchored at spec.start. Intersection i draws its
/// noise from derive_seed(seed, i).
std::vector<TimeSeries> gen_corridor(const CorridorSpec& spec);

} // namespace fractalq::synth
