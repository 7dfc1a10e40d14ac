// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "delta_process/delta.hpp"
#include "doctest.h"
#include "harness/stats.hpp"
#include "oracle_data.hpp"
#include "simkit/error.hpp"

using namespace rwrs;
using namespace rwrs::delta;

namespace {

double l1_norm_sq(simkit::RngStream& rng, std::uint64_t m) {
  const double T[] = {1.0};
  const auto f = brownian::sample_local_time_fields(T, m, rng).cumulative[0];
  double s = 0;
  for (double v : f.values) s += v * v;
  return f.h * s;
}

std::vector<double> endpoints(double T, std::uint64_t R, std::uint64_t seed, std::uint64_t m) {
  return simkit::replica_values(
      [&](simkit::RngStream& rng) { return sample_delta_path(T, T, m, rng).values.back(); }, R, seed, 0);
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a, sy += b, sxx += a * a, sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> decades(int lo, int hi) {
  std::vector<double> s;
  for (int e = lo; e <= hi; ++e) s.push_back(std::ldexp(1.0, -e));
  return s;
}

}  // namespace

TEST_CASE("delta path: start, precondition, variance, self-similarity") {
  auto rng = simkit::derive_stream(60, 0);
  const auto p = sample_delta_path(1.0, 1.0 / 64, 4096, rng);
  CHECK(p.values.size() == 65);
  CHECK(p.values[0] == 0.0);
  CHECK_THROWS_AS(sample_delta_path(1.0, 1e-4, 4096, rng), Error);

  const auto d1 = endpoints(1.0, 10000, 61, 4096);
  const auto e = simkit::summarize(
      [&] {
        std::vector<double> sq;
        for (double v : d1) sq.push_back(v * v);
        return sq;
      }(),
      61);
  CHECK(e.value == doctest::Approx(oracle_value("expected_l1_norm_sq")).epsilon(0.05));

  // Larger samples than the 10^4 of the null-quantile budget keep the 0.02 cut
  // well above the KS null spread.
  for (double T : {0.5, 2.0}) {
    auto dT = endpoints(T, 40000, 62, 1024);
    for (auto& v : dT) v /= std::pow(T, 0.75);
    CHECK(harness::ks_two_sample(dT, endpoints(1.0, 40000, 63, 1024)) < 0.02);
  }
}

TEST_CASE("delta given a frozen field is Gaussian with variance |L|^2") {
  auto rng = simkit::derive_stream(64, 0);
  const double T[] = {1.0};
  const auto f = brownian::sample_local_time_fields(T, 4096, rng).cumulative[0];
  double nsq = 0;
  for (double v : f.values) nsq += v * v;
  nsq *= f.h;
  double s2 = 0;
  constexpr int N = 10000;
  for (int i = 0; i < N; ++i) {
    const double d = delta_given_field(f, rng);
    s2 += d * d;
  }
  CHECK(s2 / N == doctest::Approx(nsq).epsilon(0.05));
}

TEST_CASE("delta marginal: characteristic function, equivalence, symmetry") {
  constexpr std::uint64_t R = 40000, m = 1024;
  const double T1[] = {1.0};
  const auto x = simkit::replica_values(
      [&](simkit::RngStream& rng) { return sample_delta_marginal(T1, m, rng)[0]; }, R, 70, 0);
  const auto nsq = simkit::replica_values([&](simkit::RngStream& rng) { return l1_norm_sq(rng, m); }, R, 71, 0);
  for (double th : {0.5, 1.0, 2.0}) {
    std::vector<double> c(R), g(R);
    for (std::uint64_t i = 0; i < R; ++i) {
      c[i] = std::cos(th * x[i]);
      g[i] = std::exp(-th * th * nsq[i] / 2);
    }
    const auto a = simkit::summarize(c, 0), b = simkit::summarize(g, 0);
    CHECK(std::fabs(a.value - b.value) < 3 * std::hypot(a.std_error, b.std_error));
  }
  const auto mean = simkit::summarize(x, 0);
  CHECK(std::fabs(mean.value) < 3 * mean.std_error);

  const double T2[] = {0.5, 1.0};
  const auto cols_m = simkit::replica_vectors(
      [&](simkit::RngStream& rng, std::span<double> out) {
        const auto v = sample_delta_marginal(T2, m, rng);
        out[0] = v[0], out[1] = v[1];
      },
      2, R, 72, 0);
  const auto cols_p = simkit::replica_vectors(
      [&](simkit::RngStream& rng, std::span<double> out) {
        const auto p = sample_delta_path(1.0, 0.5, m, rng);
        out[0] = p.values[1], out[1] = p.values[2];
      },
      2, R, 73, 0);
  CHECK(harness::ks_two_sample(cols_m[0], cols_p[0]) < 0.02);
  CHECK(harness::ks_two_sample(cols_m[1], cols_p[1]) < 0.02);
}

TEST_CASE("mollified local time: zero path, kernel bound, monotonicity, stabilization") {
  DeltaPath zero{1.0 / 256, 1.0, 0, std::vector<double>(257, 0.0)};
  for (double eps : {0.1, 0.01})
    CHECK(mollified_local_time(zero, eps, 1.0, 0.0) ==
          doctest::Approx(1.0 / std::sqrt(2 * std::numbers::pi * eps)).epsilon(1e-12));
  CHECK_THROWS_AS(mollified_local_time(zero, 0.1, 1.5, 0.0), Error);

  for (int i = 0; i < 200; ++i) {
    auto rng = simkit::derive_stream(80, i);
    const auto p = sample_delta_path(1.0, 1.0 / 4096, 4096, rng);
    const auto c = mollified_local_time_curve(p, 0.05, 0.0);
    CHECK(std::is_sorted(c.begin(), c.end()));
    CHECK(c.back() <= 1.0 / std::sqrt(2 * std::numbers::pi * 0.05) + 1e-12);
    CHECK(c.back() == doctest::Approx(mollified_local_time(p, 0.05, 1.0, 0.0)).epsilon(1e-12));
  }

  // Mean |L(eps) - L(eps/2)| shrinks along a halving sequence.  Above
  // eps ~ 0.05 the O(eps) term from times where |L_s|^2 ~ 1 still dominates
  // and the sequence is not yet monotone, so the check starts at 0.025.
  const double eps[] = {0.025, 0.0125, 0.00625};
  std::vector<double> gap(3, 0.0);
  constexpr int R = 2000;
  for (int i = 0; i < R; ++i) {
    auto rng = simkit::derive_stream(81, i);
    const auto p = sample_delta_path(1.0, 1.0 / 4096, 1u << 16, rng);
    for (int j = 0; j < 3; ++j)
      gap[j] += std::fabs(mollified_local_time(p, eps[j], 1.0, 0.0) -
                          mollified_local_time(p, eps[j] / 2, 1.0, 0.0)) / R;
  }
  CHECK(gap[1] < gap[0]);
  CHECK(gap[2] < gap[1]);
}

TEST_CASE("M_k: prefactor, k=1 identity, time scaling") {
  CHECK(mk_prefactor(1, 1.0) == doctest::Approx(std::pow(2 * std::numbers::pi, -0.5) *
                                                std::pow(oracle_value("gamma_quarter"), 1) /
                                                std::tgamma(1.25)));
  constexpr std::uint64_t m = 1u << 14;
  const auto m1 = estimate_Mk(1, 1.0, 4000, m, 90);
  const auto inv = simkit::run_replicated(
      [&](simkit::RngStream& rng) { return 1.0 / std::sqrt(l1_norm_sq(rng, m)); }, 4000, 91, 0);
  const double rhs = 4.0 / std::sqrt(2 * std::numbers::pi) * inv.value;
  const double rhs_se = 4.0 / std::sqrt(2 * std::numbers::pi) * inv.std_error;
  CHECK(std::fabs(m1.value.value - rhs) < 3 * std::hypot(m1.value.std_error, rhs_se));
  for (double t : {0.5, 2.0}) {
    const auto mt = estimate_Mk(1, t, 4000, m, 92);
    CHECK(std::fabs(mt.value.value - std::pow(t, 0.25) * m1.value.value) <
          3 * std::hypot(mt.value.std_error, std::pow(t, 0.25) * m1.value.std_error));
  }
  CHECK_THROWS_AS(estimate_Mk(0, 1.0, 10, m, 1), Error);
  CHECK_THROWS_AS(estimate_Mk(1, 1.0, 10, 100, 1), Error);
}

TEST_CASE("smoothed moment from the Gram matrix equals the path moment at fixed eps") {
  // E[L(eps,1,0)^2] both ways: path Riemann sums and det(M + eps I).
  const double eps = 0.01;
  const auto path = simkit::run_replicated(
      [&](simkit::RngStream& rng) {
        const auto p = sample_delta_path(1.0, 1.0 / 4096, 4096, rng);
        const double l = mollified_local_time(p, eps, 1.0, 0.0);
        return l * l;
      },
      4000, 93, 0);
  const auto gram = estimate_Mk(2, 1.0, 8000, 1u << 14, 94, 0, eps);
  CHECK(std::fabs(path.value - gram.value.value) < 3 * std::hypot(path.std_error, gram.value.std_error));
}

TEST_CASE("box count: preconditions, linear path, Brownian calibration, delta zero set") {
  DeltaPath lin{1.0 / 4096, 1.0, 0, {}};
  for (int j = 0; j <= 4096; ++j) lin.values.push_back(j / 4096.0 - 0.3);
  const auto scales = decades(2, 12);
  const auto r = zero_set_boxcount(lin, scales, 0.0);
  CHECK_FALSE(r.degenerate);
  for (const auto& bc : r.table) CHECK(bc.hits <= 2);
  CHECK(std::fabs(r.slope) < 0.05);

  DeltaPath flat{1.0 / 128, 1.0, 0, std::vector<double>(129, 1.0)};
  flat.values[0] = 0.0;
  CHECK(zero_set_boxcount(flat, decades(0, 7), 0.75).degenerate);
  CHECK_THROWS_AS(zero_set_boxcount(lin, decades(2, 4)), Error);
  CHECK_THROWS_AS(zero_set_boxcount(lin, decades(6, 9)), Error);

  // Threshold exponent = self-similarity index of the path.  The coarsest
  // boxes saturate, so the fit starts at 2^-5.
  const auto sc = decades(5, 14);
  double bm = 0, dl = 0;
  int nbm = 0, ndl = 0;
  for (int i = 0; i < 1000; ++i) {
    auto rng = simkit::derive_stream(95, i);
    const auto b = zero_set_boxcount(sample_brownian_path(1.0, std::ldexp(1.0, -16), rng), sc, 0.5);
    if (!b.degenerate) bm += b.slope, ++nbm;
    const auto d = zero_set_boxcount(sample_delta_path(1.0, std::ldexp(1.0, -16), 1u << 16, rng), sc, 0.75);
    if (!d.degenerate) dl += d.slope, ++ndl;
  }
  CHECK(std::fabs(bm / nbm - 0.5) < 0.05);
  CHECK(std::fabs(dl / ndl - 0.25) < 0.05);
}

TEST_CASE("local time of delta: occupation, support, Holder slopes") {
  constexpr int R = 200;
  const double eps = 1e-4;
  const std::pair<double, double> I[] = {{0.0, 0.1}, {-0.05, 0.15}};
  std::vector<double> occ(2), mol(2);
  for (int i = 0; i < R; ++i) {
    auto rng = simkit::derive_stream(96, i);
    const auto p = sample_delta_path(1.0, std::ldexp(1.0, -12), 1u << 16, rng);
    for (int j = 0; j < 2; ++j) {
      const auto [a, b] = I[j];
      for (std::size_t k = 0; k + 1 < p.values.size(); ++k)
        occ[j] += (p.values[k] >= a && p.values[k] < b) ? p.dt : 0.0;
      mol[j] += boost::math::quadrature::gauss<double, 64>::integrate(
          [&](double x) { return mollified_local_time(p, eps, 1.0, x); }, a, b);
    }
    // Support: increments off the 3 sqrt(eps) band are kernel-tail sized.
    const double e2 = 1e-3, band = 3 * std::sqrt(e2);
    const auto c = mollified_local_time_curve(p, e2, 0.0);
    const std::size_t box = 16;
    for (std::size_t s = 0; s + box < c.size(); s += box) {
      double mn = 1e300;
      for (std::size_t k = s; k < s + box; ++k) mn = std::min(mn, std::fabs(p.values[k]));
      if (mn >= band) CHECK(c[s + box] - c[s] <= box * p.dt * heat_kernel(e2, band) * (1 + 1e-12));
    }
  }
  for (int j = 0; j < 2; ++j) CHECK(mol[j] == doctest::Approx(occ[j]).epsilon(0.05));

  const auto d = decades(3, 8);
  std::vector<double> sp(d.size()), tm(d.size());
  const double he = std::ldexp(1.0, -20);
  for (int i = 0; i < R; ++i) {
    auto rng = simkit::derive_stream(97, i);
    const auto p = sample_delta_path(1.0, std::ldexp(1.0, -16), 1u << 16, rng);
    const auto c = mollified_local_time_curve(p, he, 0.0);
    for (std::size_t j = 0; j < d.size(); ++j) {
      const double lx = mollified_local_time(p, he, 1.0, d[j]);
      sp[j] += (lx - c.back()) * (lx - c.back());
      const double lt = c[static_cast<std::size_t>(std::llround(d[j] / p.dt))];
      tm[j] += lt * lt;
    }
  }
  CHECK(ols_slope(d, sp) >= 0.30);
  CHECK(ols_slope(d, tm) >= 0.45);
}
