#include "fractalq/synth.hpp"

#include "fractalq/error.hpp"
#include "fractalq/fft.hpp"
#include "fractalq/rng.hpp"
#include "fractalq/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <numbers>

namespace fractalq::synth {

namespace {

constexpr std::uint64_t kNoiseStream = 0x6E6F697365ULL;  // corridor noise sub-stream tag

void check_length(const NoiseSpec& spec) {
  if (spec.length < 2) throw UsageError("series length must be at least 2");
}

TimeSeries wrap(std::vector<double> values, const NoiseSpec& spec) {
  return TimeSeries(std::move(values), spec.dt_seconds, spec.t0, spec.label);
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::optional<WallClock> parse_optional_time(const KeyValues& kv, std::string_view key,
                                             std::optional<WallClock> fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  if (it->second == "none" || it->second.empty()) return std::nullopt;
  try {
    return parse_timestamp(it->second);
  } catch (const DataError& e) {
    throw UsageError(std::string("config key '") + std::string(key) + "': " + e.what());
  }
}

} // namespace

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
  case NoiseKind::white: return "white";
  case NoiseKind::powerlaw: return "powerlaw";
  case NoiseKind::fgn: return "fgn";
  case NoiseKind::fbm: return "fbm";
  }
  return "white";
}

NoiseKind parse_noise_kind(std::string_view text) {
  if (text == "white") return NoiseKind::white;
  if (text == "powerlaw") return NoiseKind::powerlaw;
  if (text == "fgn") return NoiseKind::fgn;
  if (text == "fbm") return NoiseKind::fbm;
  throw UsageError("unknown noise kind '" + std::string(text) + "' (white, powerlaw, fgn, fbm)");
}

void NoiseSpec::validate() const {
  if (length < 1) throw UsageError("length must be positive");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw UsageError("amplitude must be >= 0");
  if (!(dt_seconds > 0.0) || !std::isfinite(dt_seconds)) throw UsageError("dt must be positive");
  if (kind == NoiseKind::powerlaw && !(beta >= 0.0 && beta <= 2.0)) {
    throw UsageError("beta must lie in [0, 2]");
  }
  if ((kind == NoiseKind::fgn || kind == NoiseKind::fbm) && !(hurst > 0.0 && hurst < 1.0)) {
    throw UsageError("hurst must lie strictly inside (0, 1)");
  }
}

NoiseSpec noise_spec_from_kv(const KeyValues& kv) {
  kv_require_known(kv, {"kind", "beta", "hurst", "length", "seed", "amplitude", "dt", "t0", "label"});
  NoiseSpec spec;
  spec.kind = parse_noise_kind(kv_string(kv, "kind", "white"));
  spec.beta = kv_double(kv, "beta", spec.beta);
  spec.hurst = kv_double(kv, "hurst", spec.hurst);
  spec.length = static_cast<std::size_t>(kv_uint(kv, "length", spec.length));
  spec.seed = kv_uint(kv, "seed", spec.seed);
  spec.amplitude = kv_double(kv, "amplitude", spec.amplitude);
  spec.dt_seconds = kv_double(kv, "dt", spec.dt_seconds);
  spec.t0 = parse_optional_time(kv, "t0", spec.t0);
  spec.label = kv_string(kv, "label", spec.label);
  spec.validate();
  return spec;
}

KeyValues to_kv(const NoiseSpec& spec) {
  KeyValues kv;
  kv["kind"] = std::string(to_string(spec.kind));
  kv["beta"] = format_number(spec.beta);
  kv["hurst"] = format_number(spec.hurst);
  kv["length"] = std::to_string(spec.length);
  kv["seed"] = std::to_string(spec.seed);
  kv["amplitude"] = format_number(spec.amplitude);
  kv["dt"] = format_number(spec.dt_seconds);
  kv["t0"] = spec.t0 ? format_timestamp(*spec.t0) : "none";
  kv["label"] = spec.label;
  return kv;
}

TimeSeries gen_white(const NoiseSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<double> v(spec.length);
  for (double& x : v) x = spec.amplitude * rng.normal();
  return wrap(std::move(v), spec);
}

double fgn_autocovariance(std::size_t k, double hurst) {
  const double h2 = 2.0 * hurst;
  const double kk = static_cast<double>(k);
  return 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(std::abs(kk - 1.0), h2));
}

std::vector<double> fgn_samples(std::size_t n, double hurst, std::uint64_t seed) {
  if (n < 2) throw UsageError("fGn length must be at least 2");
  if (!(hurst > 0.0 && hurst < 1.0)) throw UsageError("hurst must lie strictly inside (0, 1)");

  // First row of the 2n circulant embedding the n x n Toeplitz covariance.
  const std::size_t m = 2 * n;
  std::vector<double> row(m);
  for (std::size_t j = 0; j <= n; ++j) row[j] = fgn_autocovariance(j, hurst);
  for (std::size_t j = n + 1; j < m; ++j) row[j] = row[m - j];

  const auto spectrum = fft::forward_real(row);  // n + 1 bins, real up to rounding
  double largest = 0.0;
  for (const auto& c : spectrum) largest = std::max(largest, std::abs(c.real()));
  std::vector<double> eig(spectrum.size());
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    const double lambda = spectrum[j].real();
    if (lambda < -1e-9 * largest) {
      throw Error("circulant embedding produced a negative eigenvalue (" + std::to_string(lambda) +
                  ") for H = " + std::to_string(hurst));
    }
    eig[j] = std::max(lambda, 0.0);
  }

  Rng rng(seed);
  const double md = static_cast<double>(m);
  std::vector<fft::cplx> w(n + 1);
  w[0] = std::sqrt(eig[0] / md) * rng.normal();
  for (std::size_t j = 1; j < n; ++j) {
    const double s = std::sqrt(eig[j] / (2.0 * md));
    const double re = rng.normal();
    const double im = rng.normal();
    w[j] = {s * re, s * im};
  }
  w[n] = std::sqrt(eig[n] / md) * rng.normal();

  std::vector<double> x = fft::inverse_real(w, m);
  x.resize(n);
  return x;
}

TimeSeries gen_fgn(const NoiseSpec& spec) {
  spec.validate();
  check_length(spec);
  std::vector<double> v = fgn_samples(spec.length, spec.hurst, spec.seed);
  for (double& x : v) x *= spec.amplitude;
  return wrap(std::move(v), spec);
}

TimeSeries gen_fbm(const NoiseSpec& spec) {
  const TimeSeries increments = gen_fgn(spec);
  std::vector<double> v(spec.length);
  v[0] = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) v[i] = v[i - 1] + increments[i - 1];
  return wrap(std::move(v), spec);
}

TimeSeries gen_powerlaw(const NoiseSpec& spec) {
  spec.validate();
  check_length(spec);
  const std::size_t n = spec.length;
  const double nd = static_cast<double>(n);
  Rng rng(spec.seed);

  std::vector<fft::cplx> coeffs(n / 2 + 1, {0.0, 0.0});
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    const double shape = std::pow(static_cast<double>(k) / nd, -0.5 * spec.beta);
    if (n % 2 == 0 && k == n / 2) {
      coeffs[k] = {shape * rng.normal(), 0.0};  // Nyquist bin is real
    } else {
      const double re = rng.normal();
      const double im = rng.normal();
      coeffs[k] = {shape * re * std::numbers::sqrt2 / 2.0, shape * im * std::numbers::sqrt2 / 2.0};
    }
  }
  std::vector<double> v = fft::inverse_real(coeffs, n);

  const double m = mean(v);
  for (double& x : v) x -= m;
  const double sd = stddev(v);
  const double gain = sd > 0.0 ? spec.amplitude / sd : 0.0;
  for (double& x : v) x *= gain;
  return wrap(std::move(v), spec);
}

TimeSeries generate(const NoiseSpec& spec) {
  switch (spec.kind) {
  case NoiseKind::white: return gen_white(spec);
  case NoiseKind::powerlaw: return gen_powerlaw(spec);
  case NoiseKind::fgn: return gen_fgn(spec);
  case NoiseKind::fbm: return gen_fbm(spec);
  }
  throw UsageError("unknown noise kind");
}

double DemandProfile::at(double hour, DayType day) const {
  const double scale = day == DayType::weekend ? weekend_factor : 1.0;
  const auto bump = [&](double centre) {
    const double z = (hour - centre) / peak_width_hours;
    return std::exp(-0.5 * z * z);
  };
  return base + scale * (morning_amplitude * bump(morning_peak_hour) +
                         evening_amplitude * bump(evening_peak_hour));
}

double DemandProfile::weekday_peak() const {
  return std::max(at(morning_peak_hour, DayType::weekday), at(evening_peak_hour, DayType::weekday));
}

void CorridorSpec::validate() const {
  if (n_days < 1) throw UsageError("corridor needs at least one day");
  if (!(dt_seconds > 0.0) || !std::isfinite(dt_seconds)) throw UsageError("dt must be positive");
  if (!(capacity >= 0.0) || !std::isfinite(capacity)) throw UsageError("capacity must be >= 0");
  if (n_intersections < 1) throw UsageError("corridor needs at least one intersection");
  if (!(demand.peak_width_hours > 0.0)) throw UsageError("peak width must be positive");
  if (!(demand.weekend_factor >= 0.0)) throw UsageError("weekend factor must be >= 0");
  if (!(noise_hurst > 0.0 && noise_hurst < 1.0)) throw UsageError("noise hurst must lie in (0, 1)");
  if (!(noise_amplitude >= 0.0)) throw UsageError("noise amplitude must be >= 0");
  if (!(noise_floor >= 0.0 && noise_floor <= 1.0)) throw UsageError("noise floor must lie in [0, 1]");
  if (samples() < 2) throw UsageError("corridor record is shorter than two samples");
}

std::size_t CorridorSpec::samples() const {
  return static_cast<std::size_t>(std::llround(static_cast<double>(n_days) * 86400.0 / dt_seconds));
}

CorridorSpec corridor_spec_from_kv(const KeyValues& kv) {
  kv_require_known(kv, {"days", "dt", "capacity", "intersections", "seed", "start", "base",
                        "morning_peak", "evening_peak", "morning_amplitude", "evening_amplitude",
                        "peak_width", "weekend_factor", "noise_hurst", "noise_amplitude",
                        "noise_floor", "label_prefix"});
  CorridorSpec spec;
  spec.n_days = static_cast<std::size_t>(kv_uint(kv, "days", spec.n_days));
  spec.dt_seconds = kv_double(kv, "dt", spec.dt_seconds);
  spec.capacity = kv_double(kv, "capacity", spec.capacity);
  spec.n_intersections = static_cast<std::size_t>(kv_uint(kv, "intersections", spec.n_intersections));
  spec.seed = kv_uint(kv, "seed", spec.seed);
  const auto start = parse_optional_time(kv, "start", spec.start);
  if (!start) throw UsageError("corridor start time is required");
  spec.start = *start;
  auto& d = spec.demand;
  d.base = kv_double(kv, "base", d.base);
  d.morning_peak_hour = kv_double(kv, "morning_peak", d.morning_peak_hour);
  d.evening_peak_hour = kv_double(kv, "evening_peak", d.evening_peak_hour);
  d.morning_amplitude = kv_double(kv, "morning_amplitude", d.morning_amplitude);
  d.evening_amplitude = kv_double(kv, "evening_amplitude", d.evening_amplitude);
  d.peak_width_hours = kv_double(kv, "peak_width", d.peak_width_hours);
  d.weekend_factor = kv_double(kv, "weekend_factor", d.weekend_factor);
  spec.noise_hurst = kv_double(kv, "noise_hurst", spec.noise_hurst);
  spec.noise_amplitude = kv_double(kv, "noise_amplitude", spec.noise_amplitude);
  spec.noise_floor = kv_double(kv, "noise_floor", spec.noise_floor);
  spec.label_prefix = kv_string(kv, "label_prefix", spec.label_prefix);
  spec.validate();
  return spec;
}

KeyValues to_kv(const CorridorSpec& spec) {
  KeyValues kv;
  kv["days"] = std::to_string(spec.n_days);
  kv["dt"] = format_number(spec.dt_seconds);
  kv["capacity"] = format_number(spec.capacity);
  kv["intersections"] = std::to_string(spec.n_intersections);
  kv["seed"] = std::to_string(spec.seed);
  kv["start"] = format_timestamp(spec.start);
  kv["base"] = format_number(spec.demand.base);
  kv["morning_peak"] = format_number(spec.demand.morning_peak_hour);
  kv["evening_peak"] = format_number(spec.demand.evening_peak_hour);
  kv["morning_amplitude"] = format_number(spec.demand.morning_amplitude);
  kv["evening_amplitude"] = format_number(spec.demand.evening_amplitude);
  kv["peak_width"] = format_number(spec.demand.peak_width_hours);
  kv["weekend_factor"] = format_number(spec.demand.weekend_factor);
  kv["noise_hurst"] = format_number(spec.noise_hurst);
  kv["noise_amplitude"] = format_number(spec.noise_amplitude);
  kv["noise_floor"] = format_number(spec.noise_floor);
  kv["label_prefix"] = spec.label_prefix;
  return kv;
}

namespace {

// Demand at every grid sample.
std::vector<double> demand_series(const CorridorSpec& spec) {
  const std::size_t n = spec.samples();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const WallClock t = spec.start.at_index(i, spec.dt_seconds);
    const std::int64_t ms_of_day = t.local_ms() - local_day_number(t) * 86'400'000;
    const double hour = static_cast<double>(ms_of_day) / 3'600'000.0;
    d[i] = spec.demand.at(hour, day_type_of(t));
  }
  return d;
}

} // namespace

std::vector<double> corridor_profile(const CorridorSpec& spec) {
  spec.validate();
  std::vector<double> d = demand_series(spec);
  for (double& v : d) v = std::clamp(v, 0.0, spec.capacity);
  return d;
}

std::vector<TimeSeries> gen_corridor(const CorridorSpec& spec) {
  spec.validate();
  const std::vector<double> demand = demand_series(spec);
  const double peak = spec.demand.weekday_peak();
  const std::size_t n = demand.size();

  std::vector<TimeSeries> out;
  out.reserve(spec.n_intersections);
  for (std::size_t k = 0; k < spec.n_intersections; ++k) {
    std::vector<double> q(demand);
    if (spec.noise_amplitude > 0.0) {
      const auto noise = fgn_samples(n, spec.noise_hurst,
                                     derive_seed(derive_seed(spec.seed, k), kNoiseStream));
      for (std::size_t i = 0; i < n; ++i) {
        const double level = peak > 0.0 ? demand[i] / peak : 0.0;
        const double sigma = spec.noise_amplitude * (spec.noise_floor + (1.0 - spec.noise_floor) * level);
        q[i] += sigma * noise[i];
      }
    }
    for (double& v : q) v = std::clamp(v, 0.0, spec.capacity);
    char suffix[16];
    std::snprintf(suffix, sizeof suffix, "%02zu", k + 1);
    out.emplace_back(std::move(q), spec.dt_seconds, spec.start, spec.label_prefix + suffix);
  }
  return out;
}

} // namespace fractalq::synth
