// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>

#include "delta_process/delta.hpp"
#include "simkit/error.hpp"

namespace rwrs::delta {

namespace {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, "log-log fit needs positive values");
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a, sy += b, sxx += a * a, sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> column_means(const std::vector<std::vector<double>>& cols,
                                 std::uint64_t seed) {
  std::vector<double> out;
  for (const auto& c : cols) out.push_back(simkit::summarize(c, seed).value);
  return out;
}

}  // namespace

std::vector<double> dyadic_scales(int lo, int hi) {
  require(lo <= hi, "dyadic scale exponents must be ordered");
  std::vector<double> s;
  for (int e = lo; e <= hi; ++e) s.push_back(std::ldexp(1.0, -e));
  return s;
}

SlopeSummary boxcount_slopes(PathKind kind, std::uint64_t paths, double dt, std::uint64_t m,
                             std::span<const double> scales, double threshold_exponent,
                             std::uint64_t master_seed, std::uint64_t stream_base) {
  const auto v = simkit::replica_values(
      [&](simkit::RngStream& rng) {
        const auto p = kind == PathKind::delta ? sample_delta_path(1.0, dt, m, rng)
                                               : sample_brownian_path(1.0, dt, rng);
        const auto r = zero_set_boxcount(p, scales, threshold_exponent);
        return r.degenerate ? std::numeric_limits<double>::quiet_NaN() : r.slope;
      },
      paths, master_seed, stream_base);
  SlopeSummary out;
  std::vector<double> kept;
  for (double x : v) {
    if (std::isnan(x)) ++out.degenerate;
    else kept.push_back(x);
  }
  if (kept.size() < 2) fail(ErrorCode::degenerate, "fewer than 2 paths with a sign change");
  out.mean_slope = simkit::summarize(kept, master_seed);
  return out;
}

OccupationCheck occupation_identity(double a, double b, double eps, std::uint64_t paths,
                                    double dt, std::uint64_t m, std::uint64_t master_seed,
                                    std::uint64_t stream_base) {
  require(a < b, "occupation interval must be nonempty");
  require(eps > 0.0, "eps must be positive");
  const auto cols = simkit::replica_vectors(
      [&](simkit::RngStream& rng, std::span<double> out) {
        const auto p = sample_delta_path(1.0, dt, m, rng);
        double occ = 0.0;
        for (std::size_t k = 0; k + 1 < p.values.size(); ++k)
          if (p.values[k] >= a && p.values[k] < b) occ += p.dt;
        out[0] = occ;
        out[1] = boost::math::quadrature::gauss<double, 64>::integrate(
            [&](double x) { return mollified_local_time(p, eps, 1.0, x); }, a, b);
      },
      2, paths, master_seed, stream_base);
  OccupationCheck r;
  r.occupation = simkit::summarize(cols[0], master_seed);
  r.mollified = simkit::summarize(cols[1], master_seed);
  if (r.occupation.value <= 0.0) fail(ErrorCode::degenerate, "no occupation of the interval");
  r.rel_error = std::fabs(r.mollified.value / r.occupation.value - 1.0);
  return r;
}

HolderMoments holder_moments(double eps, std::uint64_t paths, double dt, std::uint64_t m,
                             std::uint64_t master_seed, std::uint64_t stream_base, int lag_lo,
                             int lag_hi) {
  require(eps > 0.0, "eps must be positive");
  HolderMoments h;
  h.lags = dyadic_scales(lag_lo, lag_hi);
  require(h.lags.size() >= 3, "at least 3 lags");
  require(h.lags.back() >= dt, "finest lag below the path grid");
  const std::size_t L = h.lags.size();
  const auto cols = simkit::replica_vectors(
      [&](simkit::RngStream& rng, std::span<double> out) {
        const auto p = sample_delta_path(1.0, dt, m, rng);
        const auto c = mollified_local_time_curve(p, eps, 0.0);
        for (std::size_t j = 0; j < L; ++j) {
          const double dx = mollified_local_time(p, eps, 1.0, h.lags[j]) - c.back();
          out[j] = dx * dx;
          const double lt = c[static_cast<std::size_t>(std::llround(h.lags[j] / p.dt))];
          out[L + j] = lt * lt;
        }
      },
      2 * L, paths, master_seed, stream_base);
  const auto means = column_means(cols, master_seed);
  h.space.assign(means.begin(), means.begin() + static_cast<std::ptrdiff_t>(L));
  h.time.assign(means.begin() + static_cast<std::ptrdiff_t>(L), means.end());
  h.space_slope = loglog_slope(h.lags, h.space);
  h.time_slope = loglog_slope(h.lags, h.time);
  return h;
}

simkit::Estimate smoothed_moment_path(int k, double eps, double t, std::uint64_t paths, double dt,
                                      std::uint64_t m, std::uint64_t master_seed,
                                      std::uint64_t stream_base) {
  require(k >= 1, "k must be positive");
  return simkit::run_replicated(
      [&](simkit::RngStream& rng) {
        const auto p = sample_delta_path(t, dt, m, rng);
        return std::pow(mollified_local_time(p, eps, t, 0.0), k);
      },
      paths, master_seed, stream_base);
}

}  // namespace rwrs::delta
