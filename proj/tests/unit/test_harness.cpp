// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "doctest.h"
#include "exact_oracle/oracle.hpp"
#include "harness/harness.hpp"
#include "oracle_data.hpp"
#include "simkit/error.hpp"

using namespace rwrs;
using namespace rwrs::harness;
using lattice::StepLaw;
using scenery::SceneryLaw;

TEST_CASE("power-law fit: exact lines, CI formula, errors") {
  std::vector<PowerPoint> pts;
  for (int e = 4; e <= 10; ++e) pts.push_back({std::ldexp(1.0, e), std::pow(std::ldexp(1.0, e), -0.75), 0.0});
  const auto f = fit_power_law(pts);
  CHECK(f.slope == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.slope_ci == doctest::Approx(0.0).epsilon(1e-9));

  for (auto& p : pts) p.value = 2.5;
  CHECK(std::fabs(fit_power_law(pts).slope) < 1e-12);

  // Five points with known residuals: CI = t_{0.975,3} * se.
  const std::vector<PowerPoint> q = {{1, 1.0, 0.1}, {2, 0.7, 0.07}, {4, 0.33, 0.033}, {8, 0.2, 0.02}, {16, 0.13, 0.013}};
  const auto g = fit_power_law(q);
  CHECK(g.slope_ci == doctest::Approx(oracle_value("student_t_975_df3") * g.slope_se).epsilon(1e-9));
  CHECK(g.r2 < 1.0);

  CHECK_THROWS_AS(fit_power_law(std::span(q).first(2)), Error);
  auto bad = q;
  bad[2].value = 0.0;
  CHECK_THROWS_AS(fit_power_law(bad), Error);
  bad = q;
  bad[1].std_error = 0.0;
  CHECK_THROWS_AS(fit_power_law(bad), Error);
}

TEST_CASE("power-law fit: CI coverage under known noise") {
  int covered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto rng = simkit::derive_stream(200, trial);
    std::vector<PowerPoint> pts;
    for (int e = 10; e <= 15; ++e) {
      const double n = std::ldexp(1.0, e), v = 0.8 * std::pow(n, -0.75), rel = 0.03;
      pts.push_back({n, v * (1.0 + rel * rng.normal()), v * rel});
    }
    const auto f = fit_power_law(pts);
    covered += std::fabs(f.slope + 0.75) <= f.slope_ci;
  }
  CHECK(covered >= 93);
}

TEST_CASE("Kolmogorov distribution, KS statistics, chi-square") {
  CHECK(kolmogorov_sf(1.0) == doctest::Approx(oracle_value("kolmogorov_sf_1.0")).epsilon(1e-10));
  CHECK(kolmogorov_quantile(1e-3) == doctest::Approx(oracle_value("kolmogorov_quantile_1e-3")).epsilon(1e-8));
  CHECK(kolmogorov_sf(0.3) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(ks_threshold(10000, 10000) == doctest::Approx(oracle_value("kolmogorov_quantile_1e-3") / std::sqrt(5000.0)));

  const std::vector<double> a = {0.1, 0.2, 0.3};
  CHECK(ks_two_sample(a, a) == 0.0);
  const std::vector<double> b = {0.6, 0.7, 0.8};
  CHECK(ks_two_sample(a, b) == 1.0);
  auto rng = simkit::derive_stream(201, 0);
  std::vector<double> u(20000);
  for (auto& x : u) x = rng.uniform();
  CHECK(ks_one_sample(u, [](double x) { return std::clamp(x, 0.0, 1.0); }) < ks_threshold(20000));
  CHECK(ks_one_sample(u, [](double x) { return std::clamp(x * x, 0.0, 1.0); }) > 0.2);

  // Statistic 60 on 48 bins (47 dof): p from the frozen oracle.
  std::vector<double> obs(48, 100.0), exp(48, 100.0);
  obs[0] = 100.0 + std::sqrt(60.0 * 100.0 / 2.0);
  obs[1] = 100.0 - std::sqrt(60.0 * 100.0 / 2.0);
  const auto c = chi_square(obs, exp);
  CHECK(c.statistic == doctest::Approx(60.0));
  CHECK(c.dof == 47.0);
  CHECK(c.p_value == doctest::Approx(oracle_value("chi2_sf_60_df47")).epsilon(1e-9));
  // Pooling of thin bins.
  const std::vector<double> o2 = {1, 2, 50, 60, 1}, e2 = {2, 2, 50, 58, 2};
  CHECK(chi_square(o2, e2).dof == 1.0);

  const auto r = make_report("x", "KS", 0.01, 10, 10, 0.02);
  CHECK(r.pass);
  CHECK_FALSE(make_report("x", "KS", 0.03, 10, 10, 0.02).pass);
}

TEST_CASE("return curve: n=2, admissibility, oracle gate") {
  const auto step = StepLaw::simple();
  const auto scen = SceneryLaw::rademacher();
  const double one[] = {1.0};
  const std::uint64_t n2[] = {2};
  const auto c2 = estimate_return_curve(step, scen, n2, one, 1, 7);
  CHECK(c2.points[0].estimate.value == 0.5);
  CHECK_FALSE(c2.fit.has_value());

  const std::uint64_t odd[] = {2, 3};
  CHECK_THROWS_AS(estimate_return_curve(step, scen, odd, one, 10, 7), Error);
  const auto forced = estimate_return_curve(step, scen, odd, one, 50, 7, 0, Estimator::conditional, true);
  CHECK(forced.points[1].estimate.value == 0.0);
  CHECK(forced.points[1].estimate.std_error == 0.0);
  const std::uint64_t unsorted[] = {4, 2};
  CHECK_THROWS_AS(estimate_return_curve(step, scen, unsorted, one, 10, 7), Error);

  const std::uint64_t ns[] = {2, 4, 6, 8, 10, 12};
  const auto curve = estimate_return_curve(step, scen, ns, one, 4000, 8);
  for (const auto& p : curve.points) {
    const auto ex = oracle::exact_joint_return(step, scen, p.times);
    CHECK(std::fabs(p.estimate.value - ex.value) <= 3 * p.estimate.std_error + 1e-12);
  }
  REQUIRE(curve.fit.has_value());

  const double T2[] = {1.0, 2.0};
  const std::uint64_t ns2[] = {2, 4, 6};
  const auto joint = estimate_return_curve(step, scen, ns2, T2, 20000, 9);
  for (const auto& p : joint.points) {
    CHECK(p.times.size() == 2);
    const auto ex = oracle::exact_joint_return(step, scen, p.times);
    CHECK(std::fabs(p.estimate.value - ex.value) <= 3 * p.estimate.std_error + 1e-12);
  }
  const auto ind = estimate_return_curve(step, scen, ns2, T2, 20000, 9, 0, Estimator::indicator);
  for (std::size_t i = 0; i < ind.points.size(); ++i)
    CHECK(ind.points[i].estimate.std_error > joint.points[i].estimate.std_error);

  // Lazy walk and a three-point scenery.
  const StepLaw lazy(lattice::Pmf({-1, 0, 1}, std::vector<lattice::Ratio>{{1, 4}, {1, 2}, {1, 4}}));
  const SceneryLaw s3(lattice::Pmf({-1, 0, 1}, std::vector<lattice::Ratio>{{1, 3}, {1, 3}, {1, 3}}));
  const std::uint64_t ns3[] = {3, 5, 8};
  const auto c3 = estimate_return_curve(lazy, s3, ns3, one, 4000, 10);
  for (const auto& p : c3.points)
    CHECK(std::fabs(p.estimate.value - oracle::exact_joint_return(lazy, s3, p.times).value) <=
          3 * p.estimate.std_error + 1e-12);

  const double bad_T[] = {2.0, 1.0};
  CHECK_THROWS_AS(admissible_times(100, bad_T, 2), Error);
  CHECK(admissible_times(101, T2, 2) == std::vector<std::uint64_t>{100, 202});
}

TEST_CASE("counting moments: oracle gate and small-n exact value") {
  const auto step = StepLaw::simple();
  const auto scen = SceneryLaw::rademacher();
  CHECK(oracle::exact_counting_moment(step, scen, 2, 1).value == 0.5);
  const std::uint64_t ns[] = {2, 6, 12};
  for (int k = 1; k <= 3; ++k) {
    const auto c = counting_moment_curve(step, scen, k, ns, 20000, 11 + k);
    for (const auto& p : c.points) {
      const auto ex = oracle::exact_counting_moment(step, scen, p.n, k);
      CHECK(std::fabs(p.estimate.value - ex.value) <= 3 * p.estimate.std_error + 1e-12);
    }
    CHECK(c.law_factor == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(counting_moment_curve(step, scen, 4, ns, 10, 1), Error);
}

TEST_CASE("tightness and uniformity shadows report budgets") {
  const auto step = StepLaw::simple();
  const auto scen = SceneryLaw::rademacher();
  const double hs[] = {1.0 / 64, 1.0 / 16, 1.0 / 4};
  const auto t = tightness_shadow(step, scen, 1u << 12, 0.5, hs, 2000, 4.0, 20);
  CHECK(t.cells.size() == 3);
  CHECK(t.pass);
  const auto u = uniformity_shadow(step, scen, 1u << 10, 2, 500, 4.0, 21);
  CHECK(u.cells.size() == 4);
  for (const auto& c : u.cells) CHECK(c.a % 2 == 0);
  CHECK(u.pass);
  CHECK_FALSE(uniformity_shadow(step, scen, 1u << 10, 2, 500, 0.01, 21).pass);
}

TEST_CASE("correlation ratio: Brownian side exceeds 1, falls back toward 1 at short lags") {
  std::uint64_t rej = 0;
  const auto r1 = correlation_rhs(1.0, 4000, 1u << 14, 30, 0, &rej);
  const auto rq = correlation_rhs(0.25, 4000, 1u << 14, 30, simkit::stream_space(1), &rej);
  CHECK(r1.value - 1.96 * r1.std_error > 1.0);
  CHECK(rq.value - 1.96 * rq.std_error > 1.0);
  CHECK(rq.value < r1.value);
  CHECK(rej == 0);

  CHECK_THROWS_AS(correlation_ratio(255, 1.0, 10, 1), Error);
  const std::vector<std::vector<double>> zero_den = {{1, 1, 1, 1}, {1, -1, 1, -1}};
  CHECK_THROWS_AS(ratio_estimate(zero_den, 0), Error);
  const std::vector<std::vector<double>> cols = {{2, 2, 2, 2}, {1, 1, 1, 1}};
  CHECK(ratio_estimate(cols, 0).value == doctest::Approx(2.0));
}

TEST_CASE("gram convergence: self-test, diagonal, tiny fineness fails") {
  const auto step = StepLaw::simple();
  const double T1[] = {1.0};
  const auto a = walk_gram_samples(step, 1u << 12, T1, 10000, 40, 0);
  const auto b = walk_gram_samples(step, 1u << 12, T1, 10000, 40, simkit::stream_space(1));
  CHECK(ks_two_sample(a[0], b[0]) < 0.02);
  const double T2[] = {1.0, 2.0};
  const auto reps = gram_convergence_test(step, 1u << 14, T2, 10000, 1u << 14, 41);
  REQUIRE(reps.size() == 3);
  for (const auto& r : reps) CHECK(r.pass);
  CHECK(reps[0].value < 0.02);
  const auto tiny = gram_convergence_test(step, 1u << 16, T2, 10000, 1000, 42);
  CHECK_FALSE(std::all_of(tiny.begin(), tiny.end(), [](const TestReport& r) { return r.pass; }));
}

TEST_CASE("scaling law test") {
  const auto r1 = scaling_law_test(1.0, 10000, 50);
  CHECK(r1.pass);
  const auto r2 = scaling_law_test(2.0, 10000, 51);
  CHECK(r2.value < 0.03);
}
