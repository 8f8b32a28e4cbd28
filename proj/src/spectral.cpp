#include "fractalq/spectral.hpp"

#include "fractalq/error.hpp"
#include "fractalq/fft.hpp"
#include "fractalq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fractalq::spectral {

namespace {

constexpr std::size_t kMinPeriodogramLength = 16;
// Relative slack on band edges so a bin sitting exactly on an edge is kept
// despite rounding in (k + 1) * fs / n.
constexpr double kEdgeSlack = 1e-9;

// One-sided |X|^2 / norm for bins 1..n/2, doubling all but Nyquist.
void accumulate_one_sided(std::span<const fft::cplx> bins, std::size_t n, double norm,
                          std::vector<double>& power) {
  for (std::size_t k = 1; k <= n / 2; ++k) {
    double p = std::norm(bins[k]) / norm;
    if (!(n % 2 == 0 && k == n / 2)) p *= 2.0;
    power[k - 1] += p;
  }
}

std::vector<double> bin_frequencies(std::size_t n, double fs) {
  std::vector<double> f(n / 2);
  for (std::size_t k = 0; k < f.size(); ++k) {
    f[k] = static_cast<double>(k + 1) * fs / static_cast<double>(n);
  }
  return f;
}

} // namespace

Spectrum periodogram(const TimeSeries& x) {
  x.require_contiguous("periodogram");
  const std::size_t n = x.size();
  if (n < kMinPeriodogramLength) {
    throw DataError("periodogram needs at least 16 samples, got " + std::to_string(n));
  }
  const std::vector<double> centered = demean(x.values());
  const auto bins = fft::forward_real(centered);
  Spectrum s;
  s.fs = x.fs_hz();
  s.n = n;
  s.freqs = bin_frequencies(n, s.fs);
  s.power.assign(n / 2, 0.0);
  accumulate_one_sided(bins, n, s.fs * static_cast<double>(n), s.power);
  return s;
}

Spectrum welch(const TimeSeries& x, std::size_t segment_length, double overlap) {
  x.require_contiguous("Welch spectrum");
  if (segment_length < kMinPeriodogramLength) throw UsageError("Welch segments need >= 16 samples");
  if (!(overlap >= 0.0 && overlap < 1.0)) throw UsageError("Welch overlap must lie in [0, 1)");
  if (segment_length > x.size()) {
    throw DataError("Welch segment of " + std::to_string(segment_length) +
                    " samples exceeds series length " + std::to_string(x.size()));
  }
  const std::size_t L = segment_length;
  const auto step = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(L) * (1.0 - overlap))));

  std::vector<double> window(L);
  double energy = 0.0;
  for (std::size_t j = 0; j < L; ++j) {
    window[j] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(j) /
                                      static_cast<double>(L)));
    energy += window[j] * window[j];
  }

  Spectrum s;
  s.fs = x.fs_hz();
  s.n = L;
  s.freqs = bin_frequencies(L, s.fs);
  s.power.assign(L / 2, 0.0);

  const auto v = x.values();
  std::size_t segments = 0;
  std::vector<double> buf(L);
  for (std::size_t start = 0; start + L <= v.size(); start += step) {
    const auto centered = demean(v.subspan(start, L));
    for (std::size_t j = 0; j < L; ++j) buf[j] = centered[j] * window[j];
    accumulate_one_sided(fft::forward_real(buf), L, s.fs * energy, s.power);
    ++segments;
  }
  for (double& p : s.power) p /= static_cast<double>(segments);
  return s;
}

std::string_view to_string(Band band) {
  switch (band) {
  case Band::low_frequency: return "low_frequency";
  case Band::linear_decay: return "linear_decay";
  case Band::high_frequency: return "high_frequency";
  }
  return "linear_decay";
}

FrequencyBand band_from_periods(double long_period_seconds, double short_period_seconds) {
  if (!(long_period_seconds > 0.0) || !(short_period_seconds > 0.0)) {
    throw UsageError("band periods must be positive");
  }
  if (!(long_period_seconds > short_period_seconds)) {
    throw UsageError("band must list the longer period first (e.g. 14d:32m)");
  }
  return {1.0 / long_period_seconds, 1.0 / short_period_seconds};
}

std::size_t BandAnnotation::count(Band band) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), band));
}

FrequencyBand full_band(const Spectrum& spectrum) {
  if (spectrum.freqs.empty()) throw DataError("empty spectrum");
  return {spectrum.freqs.front(), spectrum.freqs.back()};
}

BandAnnotation segment_bands(const Spectrum& spectrum, double record_seconds,
                             const BandPolicy& policy) {
  const std::size_t n = spectrum.size();
  if (n == 0) throw DataError("empty spectrum");
  BandAnnotation out;
  out.labels.assign(n, Band::linear_decay);

  if (policy.full) {
    out.low_end = 0;
    out.high_begin = n;
    out.linear = full_band(spectrum);
    return out;
  }
  if (!(policy.high_cutoff_period > 0.0)) throw UsageError("high cutoff period must be positive");
  const double f_hi = 1.0 / policy.high_cutoff_period;

  const auto& f = spectrum.freqs;
  if (policy.low == LowPolicy::absolute_period) {
    if (!(policy.low_cutoff_period > policy.high_cutoff_period)) {
      throw UsageError("low cutoff period must exceed the high cutoff period");
    }
    if (record_seconds < policy.low_cutoff_period * (1.0 - kEdgeSlack)) {
      throw DataError("record of " + std::to_string(record_seconds / kDaySeconds) +
                      " days is shorter than the low-frequency cutoff of " +
                      std::to_string(policy.low_cutoff_period / kDaySeconds) +
                      " days; supply custom bands");
    }
    const double f_lo = 1.0 / policy.low_cutoff_period;
    const double edge = f_lo * (1.0 - kEdgeSlack);
    out.low_end = static_cast<std::size_t>(
        std::lower_bound(f.begin(), f.end(), edge) - f.begin());
    out.linear.f_lo = f_lo;
  } else {
    out.low_end = std::min(policy.low_harmonics, n);
    out.linear.f_lo = out.low_end < n ? f[out.low_end] : f.back();
  }
  const double hi_edge = f_hi * (1.0 + kEdgeSlack);
  out.high_begin = static_cast<std::size_t>(std::upper_bound(f.begin(), f.end(), hi_edge) - f.begin());
  out.high_begin = std::max(out.high_begin, out.low_end);
  out.linear.f_hi = f_hi;

  for (std::size_t k = 0; k < out.low_end; ++k) out.labels[k] = Band::low_frequency;
  for (std::size_t k = out.high_begin; k < n; ++k) out.labels[k] = Band::high_frequency;
  return out;
}

BandFit fit_beta(const Spectrum& spectrum, const FrequencyBand& band, FitMethod method) {
  if (!(band.f_lo > 0.0) || !(band.f_lo < band.f_hi)) {
    throw UsageError("fit band needs 0 < f_lo < f_hi");
  }
  const double lo = band.f_lo * (1.0 - kEdgeSlack);
  const double hi = band.f_hi * (1.0 + kEdgeSlack);

  BandFit fit;
  fit.f_lo = band.f_lo;
  fit.f_hi = band.f_hi;
  fit.method = method;
  std::vector<double> lf, lp;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double f = spectrum.freqs[k];
    if (f < lo || f > hi) continue;
    const double p = spectrum.power[k];
    if (!(p > 0.0)) {
      ++fit.dropped_zero_bins;
      continue;
    }
    lf.push_back(std::log10(f));
    lp.push_back(std::log10(p));
  }
  fit.n_bins = lf.size();
  if (fit.n_bins == 0 && fit.dropped_zero_bins > 0) {
    throw DataError("every bin in the fit band has zero power");
  }
  if (fit.n_bins < kMinFitBins) {
    throw DataError("fit band holds " + std::to_string(fit.n_bins) +
                    " usable bins; at least 8 are required");
  }
  const LineFit line = method == FitMethod::lad ? lad(lf, lp) : ols(lf, lp);
  fit.beta = -line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  return fit;
}

} // namespace fractalq::spectral
