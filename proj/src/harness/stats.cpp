// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include "harness/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>

#include "simkit/error.hpp"

namespace rwrs::harness {

ScalingFit fit_power_law(std::span<const PowerPoint> points) {
  require(points.size() >= 3, "power-law fit needs at least 3 points");
  std::size_t zero_se = 0;
  for (const auto& p : points) {
    require(p.x > 0.0 && p.value > 0.0, "power-law fit needs positive abscissae and values");
    require(p.std_error >= 0.0 && std::isfinite(p.std_error), "standard errors must be finite");
    zero_se += p.std_error == 0.0;
  }
  require(zero_se == 0 || zero_se == points.size(), "standard errors must be all zero or all positive");

  ScalingFit f;
  double sw = 0, sx = 0, sy = 0;
  for (const auto& p : points) {
    const double rel = p.std_error / p.value;
    const double w = zero_se ? 1.0 : 1.0 / (rel * rel);
    f.points.push_back({std::log(p.x), std::log(p.value), w});
    sw += w;
    sx += w * f.points.back().log_x;
    sy += w * f.points.back().log_value;
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& q : f.points) {
    sxx += q.weight * (q.log_x - mx) * (q.log_x - mx);
    sxy += q.weight * (q.log_x - mx) * (q.log_value - my);
    syy += q.weight * (q.log_value - my) * (q.log_value - my);
  }
  require(sxx > 0.0, "power-law fit needs distinct abscissae");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (const auto& q : f.points) {
    const double r = q.log_value - f.intercept - f.slope * q.log_x;
    rss += q.weight * r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  const double dof = static_cast<double>(points.size() - 2);
  f.slope_se = std::sqrt(rss / dof / sxx);
  const boost::math::students_t t(dof);
  f.slope_ci = boost::math::quantile(t, 0.975) * f.slope_se;
  return f;
}

//---------------------------------------------------------------------------//
double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.0) {
    // Jacobi-transformed series for the CDF converges fast for small lambda.
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) s += std::exp(-(2.0 * k - 1) * (2.0 * k - 1) * c);
    return 1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * s;
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

double kolmogorov_quantile(double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::bisect([&](double l) { return kolmogorov_sf(l) - alpha; },
                                            1e-3, 10.0, tol, iters);
  return 0.5 * (r.first + r.second);
}

double ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf) {
  require(!sample.empty(), "KS needs a nonempty sample");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  require(!a.empty() && !b.empty(), "KS needs nonempty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_threshold(std::uint64_t n1, std::uint64_t n2, double alpha) {
  require(n1 > 0, "sample size must be positive");
  const double ne = n2 == 0 ? static_cast<double>(n1)
                            : static_cast<double>(n1) * static_cast<double>(n2) /
                                  static_cast<double>(n1 + n2);
  return kolmogorov_quantile(alpha) / std::sqrt(ne);
}

ChiSquare chi_square(std::span<const double> observed, std::span<const double> expected,
                     int fitted, double min_expected) {
  require(observed.size() == expected.size() && !observed.empty(), "bin counts must match");
  std::vector<double> o, e;
  double po = 0, pe = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    po += observed[i];
    pe += expected[i];
    if (pe >= min_expected) {
      o.push_back(po);
      e.push_back(pe);
      po = pe = 0;
    }
  }
  if (pe > 0 || po > 0) {
    if (e.empty()) {
      o.push_back(po);
      e.push_back(pe);
    } else {
      o.back() += po;
      e.back() += pe;
    }
  }
  ChiSquare c;
  for (std::size_t i = 0; i < o.size(); ++i) c.statistic += (o[i] - e[i]) * (o[i] - e[i]) / e[i];
  c.dof = static_cast<double>(o.size()) - 1.0 - fitted;
  require(c.dof >= 1.0, "too few bins for a chi-square test");
  c.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(c.dof), c.statistic));
  return c;
}

TestReport make_report(std::string name, std::string statistic, double value, std::uint64_t n1,
                       std::uint64_t n2, double threshold) {
  TestReport r{std::move(name), std::move(statistic), value, n1, n2, threshold, false};
  r.pass = value <= threshold;
  return r;
}

}  // namespace rwrs::harness
