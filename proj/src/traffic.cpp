#include "fractalq/traffic.hpp"

#include "fractalq/error.hpp"
#include "fractalq/stats.hpp"

#include <algorithm>
#include <cmath>

namespace fractalq::traffic {

void CongestionConfig::validate() const {
  if (!(capacity > 0.0) || !std::isfinite(capacity)) throw UsageError("capacity must be positive");
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0)) {
    throw UsageError("threshold fraction must lie strictly inside (0, 1)");
  }
}

std::size_t congestion_q(std::span<const double> window_values, const CongestionConfig& cfg) {
  cfg.validate();
  const double threshold = cfg.threshold();
  return static_cast<std::size_t>(std::count_if(
      window_values.begin(), window_values.end(), [threshold](double v) { return v > threshold; }));
}

std::size_t congestion_q(const TimeSeries& x, const CalendarWindow& window, const CongestionConfig& cfg) {
  if (window.start_index > x.size() || window.length > x.size() - window.start_index) {
    throw UsageError("window lies outside the series");
  }
  return congestion_q(x.values().subspan(window.start_index, window.length), cfg);
}

DailyAnalysis daily_pairs(const SegmentedSeries& x, const CongestionConfig& cfg,
                          const DailyOptions& opts) {
  cfg.validate();
  if (!x.t0()) throw DataError("daily analysis needs a wall-clock anchor (t0)");
  if (opts.anchor_minutes < 0 || opts.anchor_minutes >= 24 * 60) {
    throw UsageError("anchor time must lie within the day");
  }
  if (opts.window_len < 4 * opts.local.max_scale) {
    throw UsageError("daily window must hold at least 4 x max scale samples");
  }

  const WallClock t0 = *x.t0();
  const double dt_ms = x.dt_seconds() * 1000.0;
  DailyAnalysis out;
  for (std::int64_t day = local_day_number(t0);; ++day) {
    const std::int64_t anchor_local =
        day * 86'400'000 + std::int64_t{opts.anchor_minutes} * 60'000;
    const std::int64_t anchor_utc = anchor_local - std::int64_t{t0.offset_minutes} * 60'000;
    const double offset = static_cast<double>(anchor_utc - t0.utc_ms) / dt_ms;
    if (offset < -1e-9) continue;  // anchor before the first sample
    // First sample at or after the anchor, tolerating millisecond rounding.
    const auto start = static_cast<std::size_t>(std::ceil(offset - 1e-6));
    if (start + opts.window_len > x.total_length()) break;

    const CalendarWindow window = make_window(start, opts.window_len, x.total_length(), t0, x.dt_seconds());
    const WallClock start_time = t0.at_index(start, x.dt_seconds());
    const std::string date = format_date(start_time);
    const auto* seg = x.find_segment(start, opts.window_len);
    if (seg == nullptr) {
      out.skipped.push_back({date, start, "window crosses a gap split"});
      continue;
    }
    try {
      const auto local = dfa::dfa_local(x, window, opts.local);
      const auto values = seg->series.values().subspan(start - seg->offset, opts.window_len);
      out.pairs.push_back({date, window, local.alpha, local.r_squared, congestion_q(values, cfg)});
    } catch (const dfa::WindowSkipped& e) {
      out.skipped.push_back({date, start, e.what()});
    }
  }
  return out;
}

DailyAnalysis daily_pairs(const TimeSeries& x, const CongestionConfig& cfg, const DailyOptions& opts) {
  return daily_pairs(SegmentedSeries::whole(x), cfg, opts);
}

std::vector<CorrelationPair> to_correlation_pairs(const DailyAnalysis& daily) {
  std::vector<CorrelationPair> out;
  out.reserve(daily.pairs.size());
  for (const auto& p : daily.pairs) {
    out.push_back({p.window.start_index, p.alpha, static_cast<double>(p.q),
                   p.window.day_type.value_or(DayType::weekday), p.date});
  }
  return out;
}

namespace {

std::optional<double> subset_r(std::span<const CorrelationPair> pairs, std::optional<DayType> filter,
                               std::size_t& count) {
  std::vector<double> a, q;
  for (const auto& p : pairs) {
    if (filter && p.day_type != *filter) continue;
    a.push_back(p.alpha);
    q.push_back(p.q);
  }
  count = a.size();
  if (count < kMinCorrelationPairs) return std::nullopt;
  return pearson(a, q);
}

} // namespace

CorrelationReport correlate(std::span<const CorrelationPair> pairs) {
  if (pairs.size() < kMinCorrelationPairs) {
    throw DataError("correlation needs at least 3 pairs, got " + std::to_string(pairs.size()));
  }
  for (const auto& p : pairs) {
    if (!std::isfinite(p.alpha) || !std::isfinite(p.q)) throw DataError("non-finite pair value");
  }
  CorrelationReport r;
  r.r_all = subset_r(pairs, std::nullopt, r.n_all);
  r.r_weekday = subset_r(pairs, DayType::weekday, r.n_weekday);
  r.r_weekend = subset_r(pairs, DayType::weekend, r.n_weekend);
  r.pairs.assign(pairs.begin(), pairs.end());
  return r;
}

WkCheck wk_check(double beta, double alpha) {
  WkCheck c;
  c.beta = beta;
  c.alpha = alpha;
  c.beta_tilde = 2.0 * alpha - 1.0;
  c.abs_diff = std::abs(beta - c.beta_tilde);
  if (beta != 0.0) c.rel_diff_pct = 100.0 * c.abs_diff / std::abs(beta);
  return c;
}

std::vector<std::size_t> q_trace(const SegmentedSeries& x, const dfa::ScalingTrace& trace,
                                 const CongestionConfig& cfg) {
  cfg.validate();
  std::vector<std::size_t> q;
  q.reserve(trace.entries.size());
  for (const auto& e : trace.entries) {
    const auto slice = x.window_slice(e.start_index, trace.window_len);
    if (!slice) throw UsageError("trace window does not lie inside one segment of this series");
    q.push_back(congestion_q(slice->values(), cfg));
  }
  return q;
}

namespace {

DayTypeStats summarize(const std::vector<double>& alpha, const std::vector<double>& q) {
  DayTypeStats s;
  s.n = alpha.size();
  if (alpha.empty()) return s;
  s.alpha_mean = mean(alpha);
  s.alpha_std = sample_stddev(alpha);
  const auto [lo, hi] = std::minmax_element(alpha.begin(), alpha.end());
  s.alpha_min = *lo;
  s.alpha_max = *hi;
  if (!q.empty()) s.q_mean = mean(q);
  return s;
}

} // namespace

TraceSummary classify_trace(const dfa::ScalingTrace& trace, std::span<const std::size_t> q) {
  if (trace.entries.empty()) throw DataError("cannot summarise an empty alpha(t) trace");
  if (!q.empty() && q.size() != trace.entries.size()) {
    throw UsageError("Q trace must have one value per alpha(t) entry");
  }
  std::vector<double> a_all, a_wd, a_we, q_all, q_wd, q_we;
  std::size_t above = 0, brownian = 0;
  for (std::size_t i = 0; i < trace.entries.size(); ++i) {
    const auto& e = trace.entries[i];
    a_all.push_back(e.alpha);
    if (!q.empty()) q_all.push_back(static_cast<double>(q[i]));
    if (e.day_type == DayType::weekday) {
      a_wd.push_back(e.alpha);
      if (!q.empty()) q_wd.push_back(static_cast<double>(q[i]));
    } else if (e.day_type == DayType::weekend) {
      a_we.push_back(e.alpha);
      if (!q.empty()) q_we.push_back(static_cast<double>(q[i]));
    }
    if (e.alpha > 1.0) ++above;
    if (e.alpha >= kBrownianLow && e.alpha <= kBrownianHigh) ++brownian;
  }
  TraceSummary s;
  s.all = summarize(a_all, q_all);
  s.weekday = summarize(a_wd, q_wd);
  s.weekend = summarize(a_we, q_we);
  const double n = static_cast<double>(trace.entries.size());
  s.fraction_above_one = static_cast<double>(above) / n;
  s.brownian_fraction = static_cast<double>(brownian) / n;
  return s;
}

} // namespace fractalq::traffic
