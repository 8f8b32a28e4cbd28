#include "fractalq/dfa.hpp"

#include "fractalq/error.hpp"
#include "fractalq/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>
#include <variant>

namespace fractalq::dfa {

namespace {

// Rows are an orthonormal basis of polynomials of degree <= order sampled
// on 0..s-1 (modified Gram-Schmidt, applied twice).
std::vector<std::vector<double>> polynomial_basis(std::size_t s, int order) {
  const double centre = 0.5 * static_cast<double>(s - 1);
  const double scale = static_cast<double>(s);
  std::vector<std::vector<double>> basis;
  for (int d = 0; d <= order; ++d) {
    std::vector<double> v(s);
    for (std::size_t i = 0; i < s; ++i) {
      v[i] = std::pow((static_cast<double>(i) - centre) / scale, d);
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        double dot = 0.0;
        for (std::size_t i = 0; i < s; ++i) dot += v[i] * q[i];
        for (std::size_t i = 0; i < s; ++i) v[i] -= dot * q[i];
      }
    }
    double norm = 0.0;
    for (const double e : v) norm += e * e;
    norm = std::sqrt(norm);
    for (double& e : v) e /= norm;
    basis.push_back(std::move(v));
  }
  return basis;
}

// Sum of squared residuals of `segment` after removing its projection on
// the basis.
double residual_energy(std::span<const double> segment, const std::vector<std::vector<double>>& basis,
                       std::vector<double>& scratch) {
  scratch.assign(segment.begin(), segment.end());
  for (const auto& q : basis) {
    double dot = 0.0;
    for (std::size_t i = 0; i < scratch.size(); ++i) dot += scratch[i] * q[i];
    for (std::size_t i = 0; i < scratch.size(); ++i) scratch[i] -= dot * q[i];
  }
  double energy = 0.0;
  for (const double r : scratch) energy += r * r;
  return energy;
}

void check_scales(std::span<const std::size_t> scales, std::size_t n, int order) {
  if (order < 1) throw UsageError("detrend order must be at least 1");
  if (scales.empty()) throw UsageError("no DFA scales given");
  for (std::size_t i = 1; i < scales.size(); ++i) {
    if (scales[i] <= scales[i - 1]) throw UsageError("DFA scales must be strictly increasing");
  }
  if (scales.front() < static_cast<std::size_t>(order) + 2) {
    throw UsageError("smallest scale " + std::to_string(scales.front()) +
                     " is below detrend order + 2");
  }
  if (scales.back() > n / 4) {
    throw DataError("largest scale " + std::to_string(scales.back()) +
                     " exceeds a quarter of the series length (" + std::to_string(n) + ")");
  }
}

} // namespace

std::vector<double> profile(std::span<const double> x) {
  std::vector<double> y = demean(x);
  double acc = 0.0;
  for (double& v : y) {
    acc += v;
    v = acc;
  }
  return y;
}

std::vector<double> profile(const TimeSeries& x) {
  x.require_contiguous("DFA profile");
  return profile(x.values());
}

std::vector<std::size_t> dyadic_scales(std::size_t min_scale, std::size_t max_scale) {
  if (min_scale < 1 || max_scale < min_scale) throw UsageError("invalid DFA scale range");
  std::vector<std::size_t> scales;
  for (std::size_t s = min_scale; s <= max_scale; s *= 2) scales.push_back(s);
  return scales;
}

FluctuationCurve fluctuation(std::span<const double> x, std::span<const std::size_t> scales,
                             int detrend_order) {
  const std::size_t n = x.size();
  check_scales(scales, n, detrend_order);
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (*lo == *hi) throw DataError("constant series: F(s) = 0 at every scale");

  // Profile anchored at its zero origin: N + 1 points.
  const std::vector<double> y = profile(x);
  std::vector<double> z(n + 1, 0.0);
  std::copy(y.begin(), y.end(), z.begin() + 1);
  const std::span<const double> zs(z);

  FluctuationCurve curve;
  curve.detrend_order = detrend_order;
  curve.scales.assign(scales.begin(), scales.end());
  std::vector<double> scratch;
  for (const std::size_t s : scales) {
    const auto basis = polynomial_basis(s, detrend_order);
    const std::size_t m = n / s;
    double energy = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      energy += residual_energy(zs.subspan(k * s, s), basis, scratch);
      energy += residual_energy(zs.subspan(n + 1 - (k + 1) * s, s), basis, scratch);
    }
    const double f = std::sqrt(energy / static_cast<double>(2 * m * s));
    if (!(f > 0.0)) {
      throw DataError("F(" + std::to_string(s) + ") = 0: series is polynomial within segments");
    }
    curve.fluctuation.push_back(f);
    curve.segments.push_back(2 * m);
  }
  return curve;
}

FluctuationCurve fluctuation(const TimeSeries& x, std::span<const std::size_t> scales,
                             int detrend_order) {
  x.require_contiguous("DFA");
  return fluctuation(x.values(), scales, detrend_order);
}

FluctuationCurve fit_alpha(FluctuationCurve curve) {
  if (curve.scales.size() != curve.fluctuation.size()) {
    throw UsageError("fluctuation curve has mismatched scales and values");
  }
  if (curve.scales.size() < 4) throw UsageError("alpha fit needs at least 4 scales");
  std::vector<double> ls, lf;
  for (std::size_t i = 0; i < curve.scales.size(); ++i) {
    if (!(curve.fluctuation[i] > 0.0) || !std::isfinite(curve.fluctuation[i])) {
      throw DataError("F(s) must be positive and finite to fit alpha");
    }
    ls.push_back(std::log2(static_cast<double>(curve.scales[i])));
    lf.push_back(std::log2(curve.fluctuation[i]));
  }
  const LineFit line = ols(ls, lf);
  curve.fit = ScalingFit{line.slope, line.intercept, line.r_squared};
  return curve;
}

FluctuationCurve dfa_global(const TimeSeries& x, const GlobalOptions& opts) {
  const auto scales = dyadic_scales(opts.min_scale, opts.max_scale);
  if (opts.require_span) {
    const double decades = std::log10(static_cast<double>(scales.back()) /
                                      static_cast<double>(scales.front()));
    if (decades < kMinGlobalSpanDecades) {
      throw UsageError("global DFA scales span " + std::to_string(decades) +
                       " decades; at least 1.5 are required");
    }
  }
  if (x.size() < 4 * opts.max_scale) {
    throw DataError("series of " + std::to_string(x.size()) + " samples is too short for max scale " +
                    std::to_string(opts.max_scale) + " (needs " +
                    std::to_string(4 * opts.max_scale) + ")");
  }
  return fit_alpha(fluctuation(x, scales, opts.detrend_order));
}

namespace {

void check_local(const CalendarWindow& window, const LocalOptions& opts) {
  if (window.length < 4 * opts.max_scale) {
    throw UsageError("window of " + std::to_string(window.length) +
                     " samples is shorter than 4 x max scale (" + std::to_string(opts.max_scale) + ")");
  }
}

LocalAlpha local_from_values(std::span<const double> values, const LocalOptions& opts) {
  const auto scales = dyadic_scales(opts.min_scale, opts.max_scale);
  const auto curve = fit_alpha(fluctuation(values, scales, opts.detrend_order));
  return {curve.fit->alpha, curve.fit->r_squared};
}

} // namespace

LocalAlpha dfa_local(const TimeSeries& x, const CalendarWindow& window, const LocalOptions& opts) {
  check_local(window, opts);
  if (window.start_index > x.size() || window.length > x.size() - window.start_index) {
    throw UsageError("window lies outside the series");
  }
  const auto values = x.values().subspan(window.start_index, window.length);
  if (std::any_of(values.begin(), values.end(), [](double v) { return std::isnan(v); })) {
    throw WindowSkipped("window contains missing samples");
  }
  return local_from_values(values, opts);
}

LocalAlpha dfa_local(const SegmentedSeries& x, const CalendarWindow& window, const LocalOptions& opts) {
  check_local(window, opts);
  const auto* seg = x.find_segment(window.start_index, window.length);
  if (seg == nullptr) {
    throw WindowSkipped("window [" + std::to_string(window.start_index) + ", " +
                        std::to_string(window.start_index + window.length) +
                        ") crosses a gap split");
  }
  const auto values = seg->series.values().subspan(window.start_index - seg->offset, window.length);
  try {
    return local_from_values(values, opts);
  } catch (const UsageError&) {
    throw;
  } catch (const DataError& e) {
    throw WindowSkipped(e.what());
  }
}

ScalingTrace alpha_t(const SegmentedSeries& x, const TraceOptions& opts) {
  if (opts.step < 1) throw UsageError("alpha(t) step must be at least 1");
  if (opts.window_len < 4 * opts.local.max_scale) {
    throw UsageError("alpha(t) window must hold at least 4 x max scale samples");
  }
  dyadic_scales(opts.local.min_scale, opts.local.max_scale);
  if (x.total_length() < opts.window_len) {
    throw DataError("series of " + std::to_string(x.total_length()) +
                    " samples is shorter than one window of " + std::to_string(opts.window_len));
  }

  ScalingTrace trace;
  trace.window_len = opts.window_len;
  trace.step = opts.step;
  trace.candidate_windows = (x.total_length() - opts.window_len) / opts.step + 1;

  using Outcome = std::variant<LocalAlpha, std::string>;
  std::vector<Outcome> outcomes(trace.candidate_windows);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(outcomes.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < outcomes.size(); i = next++) {
      const CalendarWindow w{i * opts.step, opts.window_len, std::nullopt};
      try {
        outcomes[i] = dfa_local(x, w, opts.local);
      } catch (const WindowSkipped& e) {
        outcomes[i] = std::string(e.what());
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, outcomes.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const std::size_t start = i * opts.step;
    if (const auto* r = std::get_if<LocalAlpha>(&outcomes[i])) {
      TraceEntry e;
      e.start_index = start;
      e.alpha = r->alpha;
      e.r_squared = r->r_squared;
      if (x.t0()) {
        e.start_time = x.t0()->at_index(start, x.dt_seconds());
        e.day_type = day_type_of(*e.start_time);
      }
      trace.entries.push_back(e);
    } else {
      trace.skipped.push_back({start, std::get<std::string>(outcomes[i])});
    }
  }
  return trace;
}

ScalingTrace alpha_t(const TimeSeries& x, const TraceOptions& opts) {
  return alpha_t(SegmentedSeries::whole(x), opts);
}

} // namespace fractalq::dfa
