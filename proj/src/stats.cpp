#include "fractalq/stats.hpp"

#include "fractalq/error.hpp"

#include <algorithm>
#include <cmath>

namespace fractalq {

double mean(std::span<const double> x) {
  if (x.empty()) throw UsageError("mean of an empty range");
  double s = 0.0;
  for (const double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  const double m = mean(x);
  double s = 0.0;
  for (const double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

double sample_stddev(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double n = static_cast<double>(x.size());
  return std::sqrt(variance(x) * n / (n - 1.0));
}

std::vector<double> demean(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  if (out.empty()) return out;
  const auto [lo, hi] = std::minmax_element(out.begin(), out.end());
  const double m = *lo == *hi ? *lo : mean(x);
  for (double& v : out) v -= m;
  return out;
}

double median(std::vector<double> x) {
  if (x.empty()) throw UsageError("median of an empty range");
  const std::size_t mid = x.size() / 2;
  std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid), x.end());
  const double upper = x[mid];
  if (x.size() % 2) return upper;
  const double lower = *std::max_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

namespace {

LineFit weighted_fit(std::span<const double> x, std::span<const double> y,
                     std::span<const double> w) {
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    sxx += w[i] * dx * dx;
    sxy += w[i] * dx * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DataError("regression needs at least two distinct abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double r_squared(std::span<const double> x, std::span<const double> y, const LineFit& fit) {
  const double my = mean(y);
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  if (!(ss_tot > 0.0)) return ss_res > 0.0 ? 0.0 : 1.0;
  return std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
}

void check_xy(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw UsageError("regression inputs differ in length");
  if (x.size() < 2) throw DataError("regression needs at least 2 points");
}

} // namespace

LineFit ols(std::span<const double> x, std::span<const double> y) {
  check_xy(x, y);
  const std::vector<double> w(x.size(), 1.0);
  LineFit fit = weighted_fit(x, y, w);
  fit.r_squared = r_squared(x, y, fit);
  return fit;
}

LineFit lad(std::span<const double> x, std::span<const double> y) {
  check_xy(x, y);
  std::vector<double> w(x.size(), 1.0);
  LineFit fit = weighted_fit(x, y, w);
  double scale = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) scale = std::max(scale, std::abs(y[i]));
  const double floor = 1e-9 * std::max(scale, 1.0);
  for (int iter = 0; iter < 200; ++iter) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = std::abs(y[i] - (fit.intercept + fit.slope * x[i]));
      w[i] = 1.0 / std::max(r, floor);
    }
    const LineFit next = weighted_fit(x, y, w);
    const bool done = std::abs(next.slope - fit.slope) <= 1e-12 * (1.0 + std::abs(fit.slope)) &&
                      std::abs(next.intercept - fit.intercept) <=
                          1e-12 * (1.0 + std::abs(fit.intercept));
    fit = next;
    if (done) break;
  }
  fit.r_squared = r_squared(x, y, fit);
  return fit;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw UsageError("correlation inputs differ in length");
  if (x.size() < 2) return std::nullopt;
  const auto constant = [](std::span<const double> v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo == *hi;
  };
  if (constant(x) || constant(y)) return std::nullopt;
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

} // namespace fractalq
