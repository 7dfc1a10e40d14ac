// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rwrs::harness {

struct PowerPoint {
  double x = 0.0;          // n (or another positive abscissa)
  double value = 0.0;      // positive
  double std_error = 0.0;  // of value; 0 everywhere means unit weights
};

struct FitPoint {
  double log_x = 0.0;
  double log_value = 0.0;
  double weight = 0.0;
};

struct ScalingFit {
  std::vector<FitPoint> points;
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double slope_ci = 0.0;  // 95% half-width, Student t with N - 2 dof
  double r2 = 0.0;
};

// Weighted least squares of log value on log x, weights (value / std_error)^2.
// Errors: fewer than 3 points, nonpositive x or value, or a mix of zero and
// nonzero standard errors -> invalid-argument.
ScalingFit fit_power_law(std::span<const PowerPoint> points);

//---------------------------------------------------------------------------//
// Kolmogorov limiting distribution: P(sup |B^0| > lambda).
double kolmogorov_sf(double lambda);
// lambda with kolmogorov_sf(lambda) = alpha.
double kolmogorov_quantile(double alpha);

double ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf);
double ks_two_sample(std::span<const double> a, std::span<const double> b);

// Asymptotic 1 - alpha quantile of the KS statistic for the sample sizes
// (n2 = 0 for the one-sample test).
double ks_threshold(std::uint64_t n1, std::uint64_t n2 = 0, double alpha = 1e-3);

struct ChiSquare {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

// Pearson statistic over bins; bins with expected < min_expected are pooled
// left to right first.  dof = bins - 1 - fitted.
ChiSquare chi_square(std::span<const double> observed, std::span<const double> expected,
                     int fitted = 0, double min_expected = 5.0);

//---------------------------------------------------------------------------//
struct TestReport {
  std::string name;
  std::string statistic;  // "KS", "chi2", "z", "abs_dev", "rate", "budget", "band_excess", "shortfall"
  double value = 0.0;
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;
  double threshold = 0.0;
  bool pass = false;  // value <= threshold
  bool operator==(const TestReport&) const = default;
};

TestReport make_report(std::string name, std::string statistic, double value, std::uint64_t n1,
                       std::uint64_t n2, double threshold);

}  // namespace rwrs::harness
