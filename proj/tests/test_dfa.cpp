#include <gtest/gtest.h>

#include "fractalq/dfa.hpp"
#include "fractalq/error.hpp"
#include "fractalq/preprocess.hpp"
#include "fractalq/stats.hpp"
#include "fractalq/synth.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

using namespace fractalq;
using namespace fractalq::dfa;

namespace {

TimeSeries series(std::vector<double> v, double dt = 120.0) { return TimeSeries(std::move(v), dt); }

const std::vector<std::size_t> kLocalScales{16, 32, 64, 128, 256};

double local_alpha(const std::vector<double>& v) {
  return dfa_local(series(v), {0, v.size(), std::nullopt}).alpha;
}

TimeSeries fgn(double h, std::uint64_t seed, std::size_t n = std::size_t{1} << 15) {
  synth::NoiseSpec s;
  s.kind = synth::NoiseKind::fgn;
  s.hurst = h;
  s.seed = seed;
  s.length = n;
  return synth::gen_fgn(s);
}

} // namespace

TEST(Profile, HandExamples) {
  EXPECT_EQ(profile(std::vector<double>{1, 1, 1, 1}), (std::vector<double>{0, 0, 0, 0}));
  EXPECT_EQ(profile(std::vector<double>{1, -1, 1, -1}), (std::vector<double>{1, 0, 1, 0}));
}

TEST(Profile, EndsAtZero) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto v = oracle::gaussian(5000, seed, 3.0);
    for (auto& e : v) e += 40.0;
    const auto y = profile(v);
    ASSERT_EQ(y.size(), v.size());
    EXPECT_LE(std::abs(y.back()), 1e-9 * 5000 * 3.0);
  }
}

TEST(Fluctuation, MatchesBruteForceOracle) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto v = oracle::gaussian(1024, seed + 10);
    const auto curve = fluctuation(std::span<const double>(v), kLocalScales);
    for (std::size_t i = 0; i < kLocalScales.size(); ++i) {
      const double ref = oracle::dfa_fluctuation(v, kLocalScales[i]);
      EXPECT_NEAR(curve.fluctuation[i], ref, 1e-10 * ref) << "seed " << seed << " s=" << kLocalScales[i];
    }
  }
}

TEST(Fluctuation, HigherOrdersMatchOracle) {
  for (const int order : {2, 3}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto v = oracle::gaussian(1030, seed + 70);
      const auto curve = fluctuation(std::span<const double>(v), kLocalScales, order);
      for (std::size_t i = 0; i < kLocalScales.size(); ++i) {
        const double ref = oracle::dfa_fluctuation(v, kLocalScales[i], order);
        EXPECT_NEAR(curve.fluctuation[i], ref, 1e-10 * ref) << "order " << order;
      }
    }
  }
}

TEST(Fluctuation, LinearRampMatchesOracle) {
  std::vector<double> ramp(2048);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
  const std::vector<std::size_t> scales{16, 32, 64, 128, 256, 512};
  const auto curve = fluctuation(std::span<const double>(ramp), scales);
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double ref = oracle::dfa_fluctuation(ramp, scales[i]);
    EXPECT_NEAR(curve.fluctuation[i], ref, 1e-12 * ref);
  }
}

TEST(Fluctuation, SegmentCountPoolsBothPasses) {
  const auto v = oracle::gaussian(1000, 3);  // not divisible by any scale
  const auto curve = fluctuation(std::span<const double>(v), std::vector<std::size_t>{16, 32, 64, 100, 250});
  for (std::size_t i = 0; i < curve.scales.size(); ++i) {
    EXPECT_EQ(curve.segments[i], 2 * (1000 / curve.scales[i]));
  }
}

TEST(Fluctuation, Preconditions) {
  const auto v = oracle::gaussian(1024, 1);
  const std::span<const double> s(v);
  EXPECT_THROW(fluctuation(s, std::vector<std::size_t>{16, 512}), DataError);  // > N/4
  EXPECT_NO_THROW(fluctuation(s, std::vector<std::size_t>{16, 256}));
  EXPECT_THROW(fluctuation(s, std::vector<std::size_t>{2, 16}), UsageError);  // < order + 2
  EXPECT_THROW(fluctuation(s, std::vector<std::size_t>{4, 16}, 3), UsageError);
  EXPECT_THROW(fluctuation(s, std::vector<std::size_t>{32, 16}), UsageError);
  EXPECT_THROW(fluctuation(s, std::vector<std::size_t>{16}, 0), UsageError);
  EXPECT_THROW(fluctuation(std::vector<double>(1024, 3.0), kLocalScales), DataError);

  std::vector<double> gap(v);
  gap[5] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(fluctuation(series(gap), kLocalScales), DataError);
}

TEST(FitAlpha, ExactPowerLawCurve) {
  FluctuationCurve c;
  for (std::size_t s = 16; s <= 8192; s *= 2) {
    c.scales.push_back(s);
    c.fluctuation.push_back(std::pow(static_cast<double>(s), 0.8));
  }
  const auto fitted = fit_alpha(c);
  EXPECT_NEAR(fitted.fit->alpha, 0.8, 1e-12);
  EXPECT_NEAR(fitted.fit->r_squared, 1.0, 1e-12);
}

TEST(FitAlpha, Preconditions) {
  FluctuationCurve c;
  c.scales = {16, 32, 64};
  c.fluctuation = {1, 2, 3};
  EXPECT_THROW(fit_alpha(c), UsageError);
  c.scales.push_back(128);
  c.fluctuation.push_back(0.0);
  EXPECT_THROW(fit_alpha(c), DataError);
}

TEST(Global, DefaultScalesOnFortySixDays) {
  const auto x = series(oracle::gaussian(46 * 720, 8));
  const auto c = dfa_global(x);
  EXPECT_EQ(c.scales.size(), 10u);
  EXPECT_EQ(c.scales.front(), 16u);
  EXPECT_EQ(c.scales.back(), 8192u);
  ASSERT_TRUE(c.fit);
}

TEST(Global, TooShortForDefaultScales) {
  EXPECT_THROW(dfa_global(series(oracle::gaussian(1 << 14, 1))), DataError);
}

TEST(Global, ScaleSpanEnforced) {
  GlobalOptions o;
  o.min_scale = 16;
  o.max_scale = 256;  // 1.2 decades
  EXPECT_THROW(dfa_global(series(oracle::gaussian(4096, 1)), o), UsageError);
  o.require_span = false;
  EXPECT_NO_THROW(dfa_global(series(oracle::gaussian(4096, 1)), o));
}

TEST(Global, PowerlawPinkNoiseSatisfiesWienerKhinchin) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    synth::NoiseSpec s;
    s.kind = synth::NoiseKind::powerlaw;
    s.beta = 1.0;
    s.seed = seed;
    const double a = dfa_global(synth::gen_powerlaw(s)).fit->alpha;
    EXPECT_GE(2 * a - 1, 0.85);
    EXPECT_LE(2 * a - 1, 1.15);
  }
}

TEST(Global, WhiteNoiseAlpha) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const double a = dfa_global(series(oracle::gaussian(1 << 15, seed + 200))).fit->alpha;
    EXPECT_GE(a, 0.45);
    EXPECT_LE(a, 0.55);
  }
}

TEST(Global, MeanAlphaIncreasesWithHurst) {
  double previous = -1.0;
  for (const double h : {0.6, 0.7, 0.8, 0.9}) {
    std::vector<double> a;
    for (std::uint64_t seed = 0; seed < 10; ++seed) a.push_back(dfa_global(fgn(h, seed)).fit->alpha);
    EXPECT_GT(mean(a), previous) << h;
    previous = mean(a);
  }
}

// ---- invariances -----------------------------------------------------------
// Scaling, shifting and reversing change only the rounding of intermediate
// sums, so alpha agrees to within a few ulps.

TEST(Invariance, PositiveScaling) {
  std::mt19937_64 gen(1);
  std::lognormal_distribution<double> c(0.0, 3.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto v = oracle::gaussian(1024, seed + 300);
    std::vector<double> w(v);
    const double k = c(gen);
    for (auto& e : w) e *= k;
    EXPECT_NEAR(local_alpha(w), local_alpha(v), 1e-12);
  }
}

TEST(Invariance, ConstantShift) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> m(-1e3, 1e3);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto v = oracle::gaussian(1024, seed + 500);
    std::vector<double> w(v);
    const double k = m(gen);
    for (auto& e : w) e += k;
    EXPECT_NEAR(local_alpha(w), local_alpha(v), 1e-12);
  }
}

TEST(Invariance, TimeReversal) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 1024 + seed * 7;  // lengths not divisible by the scales
    const auto v = oracle::gaussian(n, seed + 600);
    std::vector<double> r(v.rbegin(), v.rend());
    EXPECT_NEAR(local_alpha(r), local_alpha(v), 1e-12) << n;
    const auto cv = fluctuation(std::span<const double>(v), kLocalScales);
    const auto cr = fluctuation(std::span<const double>(r), kLocalScales);
    for (std::size_t i = 0; i < kLocalScales.size(); ++i) {
      EXPECT_NEAR(cr.fluctuation[i], cv.fluctuation[i], 1e-12 * cv.fluctuation[i]);
    }
  }
}

// ---- local windows ---------------------------------------------------------

TEST(Local, FgnWindowsNearHurst) {
  const auto x = fgn(0.7, 3, 1024 * 100);
  std::vector<double> a;
  std::size_t inside = 0;
  for (std::size_t w = 0; w < 100; ++w) {
    a.push_back(dfa_local(x, {w * 1024, 1024, std::nullopt}).alpha);
    inside += a.back() >= 0.55 && a.back() <= 0.85;
  }
  EXPECT_GE(mean(a), 0.55);
  EXPECT_LE(mean(a), 0.85);
  EXPECT_GE(inside, 95u);
}

TEST(Local, IdenticalWindowsIdenticalAlpha) {
  const auto v = oracle::gaussian(1024, 5);
  std::vector<double> twice(v);
  twice.insert(twice.end(), v.begin(), v.end());
  const auto x = series(twice);
  EXPECT_EQ(dfa_local(x, {0, 1024, std::nullopt}).alpha, dfa_local(x, {1024, 1024, std::nullopt}).alpha);
}

TEST(Local, DegenerateWindows) {
  std::vector<double> v = oracle::gaussian(3000, 6);
  std::fill(v.begin() + 1500, v.begin() + 2600, 7.0);
  const auto x = series(v);
  EXPECT_THROW(dfa_local(x, {1550, 1024, std::nullopt}), DataError);
  EXPECT_THROW(dfa_local(SegmentedSeries::whole(x), {1550, 1024, std::nullopt}), WindowSkipped);
  EXPECT_THROW(dfa_local(x, {0, 1000, std::nullopt}), UsageError);  // < 4 x 256
  EXPECT_THROW(dfa_local(x, {2500, 1024, std::nullopt}), UsageError);  // past the end
}

TEST(Local, WindowAcrossSplitIsSkipped) {
  std::vector<double> v = oracle::gaussian(3000, 7);
  for (std::size_t i = 1200; i < 1230; ++i) v[i] = std::numeric_limits<double>::quiet_NaN();
  const auto split = fill_gaps(series(v));
  ASSERT_EQ(split.segments().size(), 2u);
  EXPECT_THROW(dfa_local(split, {500, 1024, std::nullopt}), WindowSkipped);
  EXPECT_NO_THROW(dfa_local(split, {100, 1024, std::nullopt}));
  EXPECT_THROW(dfa_local(series(v), {500, 1024, std::nullopt}), WindowSkipped);
}

// ---- alpha(t) --------------------------------------------------------------

TEST(Trace, WindowCountArithmetic) {
  EXPECT_EQ(alpha_t(series(oracle::gaussian(1024 + 15, 1))).entries.size(), 2u);
  EXPECT_EQ(alpha_t(series(oracle::gaussian(1024 + 14, 1))).entries.size(), 1u);
  const auto t = alpha_t(series(oracle::gaussian(2048, 2)));
  EXPECT_EQ(t.entries.size(), (2048u - 1024u) / 15u + 1u);
  EXPECT_EQ(t.entries.size(), 69u);
  EXPECT_EQ(t.candidate_windows, 69u);
  for (std::size_t i = 0; i < t.entries.size(); ++i) EXPECT_EQ(t.entries[i].start_index, i * 15);
  EXPECT_THROW(alpha_t(series(oracle::gaussian(1000, 1))), DataError);
  dfa::TraceOptions zero_step;
  zero_step.step = 0;
  EXPECT_THROW(alpha_t(series(oracle::gaussian(2048, 1)), zero_step), UsageError);
}

TEST(Trace, ParallelMatchesSerialAndDirect) {
  const auto x = series(oracle::gaussian(6000, 11));
  TraceOptions serial;
  serial.threads = 1;
  TraceOptions parallel;
  parallel.threads = 4;
  const auto a = alpha_t(x, serial);
  const auto b = alpha_t(x, parallel);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].start_index, b.entries[i].start_index);
    EXPECT_EQ(a.entries[i].alpha, b.entries[i].alpha);
    EXPECT_EQ(a.entries[i].alpha, dfa_local(x, {a.entries[i].start_index, 1024, std::nullopt}).alpha);
  }
}

TEST(Trace, SplitWindowsOmittedAndReported) {
  std::vector<double> v = oracle::gaussian(5000, 12);
  for (std::size_t i = 2000; i < 2040; ++i) v[i] = std::numeric_limits<double>::quiet_NaN();
  const auto split = fill_gaps(series(v));
  const auto t = alpha_t(split);
  EXPECT_EQ(t.entries.size() + t.skipped.size(), t.candidate_windows);
  EXPECT_FALSE(t.skipped.empty());
  for (const auto& e : t.entries) {
    EXPECT_NE(split.find_segment(e.start_index, 1024), nullptr);
    EXPECT_TRUE(std::isfinite(e.alpha));
  }
  for (const auto& s : t.skipped) EXPECT_EQ(split.find_segment(s.start_index, 1024), nullptr);
  for (std::size_t i = 1; i < t.entries.size(); ++i) {
    EXPECT_EQ((t.entries[i].start_index - t.entries[i - 1].start_index) % 15, 0u);
    EXPECT_GT(t.entries[i].start_index, t.entries[i - 1].start_index);
  }
}

TEST(Trace, StationaryFgnHasNoTrend) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto t = alpha_t(fgn(0.7, seed));
    std::vector<double> a;
    for (const auto& e : t.entries) a.push_back(e.alpha);
    EXPECT_LT(sample_stddev(a), 0.15);
  }
}

TEST(Trace, CalendarFieldsFromAnchor) {
  const TimeSeries x(oracle::gaussian(2000, 13), 120.0, parse_timestamp("2018-01-05T23:00:00-05:00"));
  const auto t = alpha_t(x);
  ASSERT_TRUE(t.entries[0].start_time);
  EXPECT_EQ(t.entries[0].day_type, DayType::weekday);  // Friday 23:00
  EXPECT_EQ(t.entries[2].day_type, DayType::weekend);  // Saturday 00:00
}
