#pragma once

// Naive reference implementations used as test oracles. Written directly
// from the textbook definitions, in long double, with no code shared with
// the library.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline std::vector<double> gaussian(std::size_t n, std::uint64_t seed, double sigma = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d(0.0, sigma);
  std::vector<double> x(n);
  for (auto& v : x) v = d(gen);
  return x;
}

// Least-squares polynomial fit of degree `order` to (t, y) via normal
// equations solved by Gaussian elimination with partial pivoting; returns
// the residual sum of squares.
inline long double poly_residual_ss(const std::vector<long double>& y, int order) {
  const std::size_t s = y.size();
  const int m = order + 1;
  std::vector<std::vector<long double>> a(m, std::vector<long double>(m + 1, 0.0L));
  const long double c = (static_cast<long double>(s) - 1.0L) / 2.0L;
  for (std::size_t i = 0; i < s; ++i) {
    const long double t = static_cast<long double>(i) - c;
    for (int r = 0; r < m; ++r) {
      for (int k = 0; k < m; ++k) a[r][k] += std::pow(t, r + k);
      a[r][m] += std::pow(t, r) * y[i];
    }
  }
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      const long double f = a[r][col] / a[col][col];
      for (int k = col; k <= m; ++k) a[r][k] -= f * a[col][k];
    }
  }
  long double ss = 0.0L;
  for (std::size_t i = 0; i < s; ++i) {
    const long double t = static_cast<long double>(i) - c;
    long double fit = 0.0L;
    for (int r = 0; r < m; ++r) fit += a[r][m] / a[r][r] * std::pow(t, r);
    const long double e = y[i] - fit;
    ss += e * e;
  }
  return ss;
}

// F(s) = sqrt( (1/N_s) sum_v F^2(v) ),  F^2(v) = (1/s) sum_i (Y - fit)^2,
// where N_s counts segments taken from the front and the back of the
// zero-anchored profile (0, Y_1, ..., Y_N).
inline double dfa_fluctuation(const std::vector<double>& x, std::size_t s, int order = 1) {
  const std::size_t n = x.size();
  long double mean = 0.0L;
  for (double v : x) mean += v;
  mean /= static_cast<long double>(n);
  std::vector<long double> y(n + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) y[i + 1] = y[i] + (static_cast<long double>(x[i]) - mean);

  const std::size_t segs = n / s;
  long double total = 0.0L;
  for (std::size_t v = 0; v < segs; ++v) {
    std::vector<long double> fwd(y.begin() + static_cast<std::ptrdiff_t>(v * s),
                                 y.begin() + static_cast<std::ptrdiff_t>((v + 1) * s));
    std::vector<long double> bwd(y.end() - static_cast<std::ptrdiff_t>((v + 1) * s),
                                 y.end() - static_cast<std::ptrdiff_t>(v * s));
    total += poly_residual_ss(fwd, order) / static_cast<long double>(s);
    total += poly_residual_ss(bwd, order) / static_cast<long double>(s);
  }
  return static_cast<double>(std::sqrt(total / static_cast<long double>(2 * segs)));
}

inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const long double n = static_cast<long double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  return static_cast<double>((n * sxy - sx * sy) / (n * sxx - sx * sx));
}

// One-sided periodogram by direct O(N^2) DFT; bins 1..N/2.
inline std::vector<double> periodogram(const std::vector<double>& x, double fs) {
  const std::size_t n = x.size();
  long double mean = 0.0L;
  for (double v : x) mean += v;
  mean /= static_cast<long double>(n);
  std::vector<double> p(n / 2);
  for (std::size_t k = 1; k <= n / 2; ++k) {
    long double re = 0.0L, im = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
      const long double ang = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>(k * j % n) /
                              static_cast<long double>(n);
      re += (x[j] - mean) * std::cos(ang);
      im += (x[j] - mean) * std::sin(ang);
    }
    long double v = (re * re + im * im) / (static_cast<long double>(fs) * static_cast<long double>(n));
    if (!(n % 2 == 0 && k == n / 2)) v *= 2.0L;
    p[k - 1] = static_cast<double>(v);
  }
  return p;
}

inline double fgn_autocovariance(double k, double h) {
  return 0.5 * (std::pow(std::fabs(k + 1), 2 * h) - 2 * std::pow(std::fabs(k), 2 * h) +
                std::pow(std::fabs(k - 1), 2 * h));
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

inline double population_variance(const std::vector<double>& x) {
  long double m = 0;
  for (double v : x) m += v;
  m /= x.size();
  long double ss = 0;
  for (double v : x) ss += (v - m) * (v - m);
  return static_cast<double>(ss / x.size());
}

} // namespace oracle
