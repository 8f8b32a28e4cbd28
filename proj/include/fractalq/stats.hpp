#pragma once

#include <optional>
#include <span>
#include <vector>

namespace fractalq {

double mean(std::span<const double> x);
/// Population variance (divides by n).
double variance(std::span<const double> x);
double stddev(std::span<const double> x);
/// Sample standard deviation (divides by n - 1); 0 for fewer than 2 values.
double sample_stddev(std::span<const double> x);

/// Values minus their mean. A constant input maps to exact zeros.
std::vector<double> demean(std::span<const double> x);

/// Median of the values; the input is taken by value and partially sorted.
double median(std::vector<double> x);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = intercept + slope * x. Needs >= 2 points with
/// distinct x.
LineFit ols(std::span<const double> x, std::span<const double> y);

/// Least absolute deviations by iteratively reweighted least squares,
/// started from the OLS solution. r_squared is reported on the OLS scale.
LineFit lad(std::span<const double> x, std::span<const double> y);

/// Pearson correlation, or nullopt when fewer than 2 points or either
/// variable has zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

} // namespace fractalq
