#include <gtest/gtest.h>

#include "fractalq/dfa.hpp"
#include "fractalq/error.hpp"
#include "fractalq/rng.hpp"
#include "fractalq/spectral.hpp"
#include "fractalq/stats.hpp"
#include "fractalq/synth.hpp"
#include "fractalq/traffic.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

using namespace fractalq;
using synth::NoiseKind;
using synth::NoiseSpec;

namespace {

NoiseSpec spec_of(NoiseKind kind, std::uint64_t seed, double param = 0.5) {
  NoiseSpec s;
  s.kind = kind;
  s.seed = seed;
  if (kind == NoiseKind::powerlaw) s.beta = param;
  if (kind == NoiseKind::fgn || kind == NoiseKind::fbm) s.hurst = param;
  return s;
}

double global_alpha(const TimeSeries& x) { return dfa::dfa_global(x).fit->alpha; }

double default_band_beta(const TimeSeries& x) {
  const auto s = spectral::periodogram(x);
  const auto bands = spectral::segment_bands(s, x.duration_seconds());
  return spectral::fit_beta(s, bands.linear).beta;
}

std::vector<double> values(const TimeSeries& x) { return {x.values().begin(), x.values().end()}; }

} // namespace

TEST(Rng, DeterministicAndStreamsDiffer) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.normal(), b.normal());
  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 100; ++s) seeds.insert(derive_seed(7, s));
  EXPECT_EQ(seeds.size(), 100u);
  EXPECT_NE(derive_seed(0, 1), derive_seed(1, 0));
}

TEST(Rng, NormalMoments) {
  Rng r(3);
  std::vector<double> v(200000);
  for (auto& e : v) e = r.normal();
  EXPECT_NEAR(mean(v), 0.0, 0.01);
  EXPECT_NEAR(variance(v), 1.0, 0.01);
}

TEST(White, DfaAlphaNearHalf) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const double a = global_alpha(synth::gen_white(spec_of(NoiseKind::white, seed)));
    EXPECT_GE(a, 0.45) << seed;
    EXPECT_LE(a, 0.55) << seed;
  }
}

TEST(White, DeterministicPerSeed) {
  const auto s = spec_of(NoiseKind::white, 99);
  EXPECT_EQ(values(synth::gen_white(s)), values(synth::gen_white(s)));
  EXPECT_NE(values(synth::gen_white(s)), values(synth::gen_white(spec_of(NoiseKind::white, 100))));
}

TEST(White, ZeroAmplitudeIsAllZero) {
  for (const auto kind : {NoiseKind::white, NoiseKind::powerlaw, NoiseKind::fgn, NoiseKind::fbm}) {
    auto s = spec_of(kind, 1);
    s.amplitude = 0.0;
    s.length = 1024;
    const auto x = synth::generate(s);
    for (const double v : x.values()) EXPECT_EQ(v, 0.0);
  }
}

TEST(Fgn, HalfHurstHasNoLagOneCorrelation) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = values(synth::gen_fgn(spec_of(NoiseKind::fgn, seed, 0.5)));
    const std::vector<double> a(x.begin(), x.end() - 1), b(x.begin() + 1, x.end());
    EXPECT_LE(std::abs(oracle::pearson(a, b)), 3.0 / std::sqrt(static_cast<double>(x.size())));
  }
}

// Single-seed spread at H = 0.9 is about 0.03, so the band applies to the
// 20-seed mean.
TEST(Fgn, DfaAlphaTracksHurst) {
  std::vector<double> a;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    a.push_back(global_alpha(synth::gen_fgn(spec_of(NoiseKind::fgn, seed, 0.9))));
  }
  EXPECT_GE(mean(a), 0.85);
  EXPECT_LE(mean(a), 0.95);
}

TEST(Fgn, PeriodogramBetaIsTwoHMinusOne) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const double b = default_band_beta(synth::gen_fgn(spec_of(NoiseKind::fgn, seed, 0.7)));
    EXPECT_GE(b, 0.3) << seed;
    EXPECT_LE(b, 0.5) << seed;
  }
}

TEST(Fgn, AutocovarianceMatchesClosedForm) {
  constexpr std::size_t kSeeds = 200;
  constexpr std::size_t kN = 4096;
  constexpr std::size_t kLags = 10;
  for (const double h : {0.3, 0.7, 0.9}) {
    std::vector<std::vector<double>> est(kLags + 1);
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
      const auto x = synth::fgn_samples(kN, h, seed);
      for (std::size_t k = 0; k <= kLags; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i + k < kN; ++i) acc += x[i] * x[i + k];
        est[k].push_back(acc / static_cast<double>(kN - k));
      }
    }
    for (std::size_t k = 0; k <= kLags; ++k) {
      const double se = sample_stddev(est[k]) / std::sqrt(static_cast<double>(kSeeds));
      EXPECT_NEAR(mean(est[k]), oracle::fgn_autocovariance(static_cast<double>(k), h), 3.0 * se)
          << "H=" << h << " lag " << k;
      EXPECT_NEAR(synth::fgn_autocovariance(k, h), oracle::fgn_autocovariance(static_cast<double>(k), h), 1e-14);
    }
  }
}

TEST(Fgn, RejectsHurstOutsideOpenInterval) {
  for (const double h : {0.0, 1.0, 1.2, -0.1}) {
    EXPECT_THROW(synth::gen_fgn(spec_of(NoiseKind::fgn, 0, h)), UsageError);
  }
}

TEST(Fbm, StartsAtZeroAndDifferencesToFgn) {
  for (const double h : {0.3, 0.5, 0.9}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto fbm = synth::gen_fbm(spec_of(NoiseKind::fbm, seed, h));
      const auto fgn = synth::gen_fgn(spec_of(NoiseKind::fgn, seed, h));
      ASSERT_EQ(fbm.size(), fgn.size());
      EXPECT_EQ(fbm[0], 0.0);
      // Differencing a running sum is exact up to one rounding of the sum.
      for (std::size_t i = 1; i < fbm.size(); ++i) {
        const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(fbm[i]));
        ASSERT_NEAR(fbm[i] - fbm[i - 1], fgn[i - 1], tol) << i;
      }
    }
  }
}

TEST(Fbm, RandomWalkAlpha) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const double a = global_alpha(synth::gen_fbm(spec_of(NoiseKind::fbm, seed, 0.5)));
    EXPECT_GE(a, 1.4) << seed;
    EXPECT_LE(a, 1.6) << seed;
  }
}

TEST(Fbm, PersistentAlpha) {
  std::vector<double> a;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    a.push_back(global_alpha(synth::gen_fbm(spec_of(NoiseKind::fbm, seed, 0.9))));
  }
  EXPECT_GE(mean(a), 1.8);
  EXPECT_LE(mean(a), 2.0);
}

TEST(Powerlaw, BetaRecoveredAcrossRange) {
  struct Case {
    double beta, lo, hi;
  };
  for (const Case c : {Case{0.0, -0.1, 0.1}, Case{1.0, 0.9, 1.1}, Case{2.0, 1.85, 2.15}}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const double b = default_band_beta(synth::gen_powerlaw(spec_of(NoiseKind::powerlaw, seed, c.beta)));
      EXPECT_GE(b, c.lo) << "beta0=" << c.beta << " seed " << seed;
      EXPECT_LE(b, c.hi) << "beta0=" << c.beta << " seed " << seed;
    }
  }
}

TEST(Powerlaw, ZeroMeanAndUnitScale) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto s = spec_of(NoiseKind::powerlaw, seed, static_cast<double>(seed % 5) * 0.5);
    s.amplitude = 3.5;
    s.length = 1000 + seed;  // odd and even lengths
    const auto x = values(synth::gen_powerlaw(s));
    const double sd = std::sqrt(oracle::population_variance(x));
    EXPECT_LE(std::abs(mean(x)), 1e-12 * sd);
    EXPECT_NEAR(sd, 3.5, 1e-9);
  }
}

TEST(Powerlaw, RejectsBetaOutsideRange) {
  EXPECT_THROW(synth::gen_powerlaw(spec_of(NoiseKind::powerlaw, 0, 2.5)), UsageError);
  EXPECT_THROW(synth::gen_powerlaw(spec_of(NoiseKind::powerlaw, 0, -0.5)), UsageError);
}

TEST(NoiseSpecConfig, KeyValueRoundTrip) {
  auto s = spec_of(NoiseKind::fgn, 12345678901234ULL, 0.77);
  s.length = 5000;
  s.amplitude = 2.25;
  s.dt_seconds = 60;
  s.t0 = parse_timestamp("2018-01-01T07:00:00-05:00");
  s.label = "probe";
  const auto back = synth::noise_spec_from_kv(synth::to_kv(s));
  EXPECT_EQ(values(synth::generate(back)), values(synth::generate(s)));
  EXPECT_EQ(synth::to_kv(back), synth::to_kv(s));

  std::istringstream in("kind = powerlaw\nbeta = 0.4\nlength = 2048\nbogus = 1\n");
  EXPECT_THROW(synth::noise_spec_from_kv(parse_kv(in)), UsageError);
}

// ---- corridor ------------------------------------------------------------

TEST(Corridor, ZeroNoiseEqualsClippedProfile) {
  synth::CorridorSpec spec;
  spec.n_days = 7;
  spec.noise_amplitude = 0.0;
  spec.capacity = 25.0;  // low enough that the weekday peaks clip
  const auto profile = synth::corridor_profile(spec);
  const auto out = synth::gen_corridor(spec);
  ASSERT_EQ(out.size(), spec.n_intersections);
  bool clipped = false;
  for (const auto& x : out) {
    EXPECT_EQ(values(x), profile);
    ASSERT_EQ(x.size(), 7u * 720u);
  }
  for (const double v : profile) clipped |= v == 25.0;
  EXPECT_TRUE(clipped);
}

TEST(Corridor, ZeroCapacityIsAllZero) {
  synth::CorridorSpec spec;
  spec.n_days = 2;
  spec.capacity = 0.0;
  for (const auto& x : synth::gen_corridor(spec)) {
    for (const double v : x.values()) EXPECT_EQ(v, 0.0);
  }
}

TEST(Corridor, ClippedAnchoredAndDistinct) {
  synth::CorridorSpec spec;
  spec.seed = 4;
  const auto out = synth::gen_corridor(spec);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].label(), "intersection-01");
  EXPECT_EQ(out[2].label(), "intersection-03");
  EXPECT_NE(values(out[0]), values(out[1]));
  for (const auto& x : out) {
    ASSERT_TRUE(x.t0().has_value());
    EXPECT_EQ(format_timestamp(*x.t0()), "2018-01-01T00:00:00-05:00");
    EXPECT_EQ(x.size(), 28u * 720u);
    for (const double v : x.values()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, spec.capacity);
    }
  }
  EXPECT_EQ(values(synth::gen_corridor(spec)[1]), values(out[1]));
}

TEST(Corridor, WeekdayPeaksTallerThanWeekend) {
  const synth::DemandProfile d;
  EXPECT_GT(d.at(8.0, DayType::weekday), d.at(8.0, DayType::weekend));
  EXPECT_GT(d.at(17.5, DayType::weekday), d.at(17.5, DayType::weekend));
  // Far from both peaks only the base level remains.
  EXPECT_NEAR(d.at(1.0, DayType::weekday), d.base, 1e-3);
}

TEST(Corridor, DailyQHigherOnWeekdaysInMostWeekPairs) {
  // Week-pair: a weekday and a weekend day of the same calendar week.
  std::size_t pairs = 0, weekday_higher = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    synth::CorridorSpec spec;
    spec.seed = seed;
    for (const auto& x : synth::gen_corridor(spec)) {
      const auto daily = traffic::daily_pairs(x, {spec.capacity, 0.6});
      for (const auto& a : daily.pairs) {
        for (const auto& b : daily.pairs) {
          if (a.window.day_type != DayType::weekday || b.window.day_type != DayType::weekend) continue;
          if (a.window.start_index / (7 * 720) != b.window.start_index / (7 * 720)) continue;
          ++pairs;
          weekday_higher += a.q > b.q;
        }
      }
    }
  }
  ASSERT_GT(pairs, 0u);
  EXPECT_GE(static_cast<double>(weekday_higher), 0.8 * static_cast<double>(pairs));
}

TEST(Corridor, KeyValueRoundTrip) {
  synth::CorridorSpec spec;
  spec.n_days = 3;
  spec.seed = 77;
  spec.demand.weekend_factor = 0.4;
  spec.start = parse_timestamp("2018-02-03T00:00:00+01:00");
  const auto back = synth::corridor_spec_from_kv(synth::to_kv(spec));
  EXPECT_EQ(synth::to_kv(back), synth::to_kv(spec));
  EXPECT_EQ(values(synth::gen_corridor(back)[0]), values(synth::gen_corridor(spec)[0]));
}
