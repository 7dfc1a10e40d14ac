// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "exact_oracle/oracle.hpp"
#include "simkit/error.hpp"

using namespace rwrs;
using namespace rwrs::oracle;
using lattice::Pmf;
using lattice::Ratio;
using lattice::StepLaw;
using scenery::SceneryLaw;

namespace {
const StepLaw kSimple = StepLaw::simple();
const SceneryLaw kRad = SceneryLaw::rademacher();
const StepLaw kLazy(Pmf({-1, 0, 1}, std::vector<Ratio>{{1, 4}, {1, 2}, {1, 4}}));
const SceneryLaw kTri(Pmf({-1, 0, 1}, std::vector<Ratio>{{1, 4}, {1, 2}, {1, 4}}));
const SceneryLaw kSkew(Pmf({-2, 1}, std::vector<Ratio>{{1, 3}, {2, 3}}));
}  // namespace

TEST_CASE("exact joint return: documented values") {
  const std::uint64_t t2[] = {2};
  auto r = exact_joint_return(kSimple, kRad, t2);
  CHECK(r.value == 0.5);
  CHECK(r.exact == "1/2");
  CHECK(r.path_count == 4);
  CHECK(r.method == "rational");
  const std::uint64_t t3[] = {3};
  CHECK(exact_joint_return(kSimple, kRad, t3).value == 0.0);
  CHECK(exact_joint_return(kSimple, kRad, t3).exact == "0");
  const std::uint64_t t24[] = {2, 4};
  auto a = exact_joint_return(kSimple, kRad, t24);
  auto b = exact_joint_return_by_pairs(kSimple, kRad, t24);
  CHECK(a.exact == b.exact);
  CHECK(a.value > 0.0);
}

TEST_CASE("rational and double-double modes agree") {
  for (const auto& scen : {kRad, kTri, kSkew}) {
    for (std::uint64_t n = 1; n <= 10; ++n) {
      const std::uint64_t t[] = {n};
      auto q = exact_joint_return(kSimple, scen, t, Arithmetic::rational);
      auto f = exact_joint_return(kSimple, scen, t, Arithmetic::floating);
      CHECK(f.method == "double-double");
      CHECK(std::fabs(q.value - f.value) < 1e-15);
    }
  }
}

TEST_CASE("two independent enumerations agree exactly") {
  const std::vector<std::vector<std::uint64_t>> cases = {{4}, {2, 6}, {4, 8}, {2, 4, 6}, {6, 10}};
  for (const auto& scen : {kRad, kTri, kSkew})
    for (const auto& t : cases) {
      CHECK(exact_joint_return(kSimple, scen, t).exact ==
            exact_joint_return_by_pairs(kSimple, scen, t).exact);
      CHECK(exact_joint_return(kLazy, scen, t).exact ==
            exact_joint_return_by_pairs(kLazy, scen, t).exact);
    }
}

TEST_CASE("lattice vanishing is exact") {
  for (std::uint64_t n = 1; n <= 11; n += 2) {
    const std::uint64_t t[] = {n};
    CHECK(exact_joint_return(kSimple, kRad, t).exact == "0");
    CHECK(exact_joint_return(kLazy, kRad, t).exact == "0");
    CHECK(exact_joint_return(kSimple, kRad, t, Arithmetic::floating).value == 0.0);
  }
  // d0 = 3 for {-2: 1/3, 1: 2/3}.
  for (std::uint64_t n : {1, 2, 4, 5, 7}) {
    const std::uint64_t t[] = {n};
    CHECK(exact_joint_return(kSimple, kSkew, t).exact == "0");
  }
  const std::uint64_t mixed[] = {2, 5};
  CHECK(exact_joint_return(kSimple, kRad, mixed).exact == "0");
}

TEST_CASE("counting moments") {
  auto m = exact_counting_moment(kSimple, kRad, 2, 1);
  CHECK(m.value == 0.5);
  CHECK(m.exact == "1/2");
  // Linearity: E N_n = sum_{m<=n} P(Z_m = 0).
  for (const auto& scen : {kRad, kTri}) {
    for (std::uint64_t n = 1; n <= 9; ++n) {
      double sum = 0.0;
      for (std::uint64_t i = 1; i <= n; ++i) {
        const std::uint64_t t[] = {i};
        sum += exact_joint_return(kSimple, scen, t).value;
      }
      CHECK(exact_counting_moment(kSimple, scen, n, 1).value == doctest::Approx(sum).epsilon(1e-14));
    }
  }
  // Expansion of the square at n = 4.
  double sq = 0.0;
  for (std::uint64_t a = 1; a <= 4; ++a)
    for (std::uint64_t b = 1; b <= 4; ++b) {
      std::vector<std::uint64_t> t = a == b ? std::vector<std::uint64_t>{a}
                                           : std::vector<std::uint64_t>{std::min(a, b), std::max(a, b)};
      sq += exact_joint_return(kSimple, kRad, t).value;
    }
  CHECK(exact_counting_moment(kSimple, kRad, 4, 2).value == doctest::Approx(sq).epsilon(1e-14));
}

TEST_CASE("characteristic function") {
  const std::uint64_t t2[] = {2};
  const double zero[] = {0.0};
  CHECK(std::abs(exact_char_function(kSimple, kRad, t2, zero) - 1.0) < 1e-15);
  const double half_pi[] = {std::numbers::pi / 2};
  CHECK(std::abs(exact_char_function(kSimple, kRad, t2, half_pi)) < 1e-15);

  // Shift identity phi(theta + 2 pi l / d) = phi_xi(2 pi / d)^{sum l_j n_j} phi(theta).
  const std::uint64_t t[] = {3, 7};
  const double th[] = {0.3, -0.7};
  for (const auto& scen : {kRad, kSkew}) {
    const double p = 2.0 * std::numbers::pi / static_cast<double>(scen.d());
    const auto base = exact_char_function(kSimple, scen, t, th);
    const double shifted[] = {th[0] + p, th[1] - 2 * p};
    const auto lhs = exact_char_function(kSimple, scen, t, shifted);
    const auto factor = std::pow(scen.phi(p), 3 * 1 + 4 * -2);
    CHECK(std::abs(lhs - factor * base) < 1e-12);
  }
}

TEST_CASE("inversion of the characteristic function") {
  // (d/2pi)^k double integral over [-pi/d, pi/d]^k by the periodic trapezoid
  // rule equals the joint return probability.
  for (const auto& scen : {kRad, kTri}) {
    const std::vector<std::vector<std::uint64_t>> cases = {{4}, {2, 6}};
    for (const auto& times : cases) {
      const int M = 32;
      const double h = 2.0 * std::numbers::pi / (static_cast<double>(scen.d()) * M);
      double acc = 0.0;
      if (times.size() == 1) {
        for (int j = 0; j < M; ++j) {
          const double th[] = {j * h};
          acc += exact_char_function(kSimple, scen, times, th).real();
        }
        acc /= M;
      } else {
        for (int i = 0; i < M; ++i)
          for (int j = 0; j < M; ++j) {
            const double th[] = {i * h, j * h};
            acc += exact_char_function(kSimple, scen, times, th).real();
          }
        acc /= M * M;
      }
      CHECK(std::fabs(acc - exact_joint_return(kSimple, scen, times).value) < 1e-9);
    }
  }
}

TEST_CASE("budget enforcement") {
  const std::uint64_t big[] = {40};
  CHECK_THROWS_AS(exact_joint_return(kSimple, kRad, big), Error);
  try {
    exact_joint_return(kSimple, kRad, big);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::resource_limit);
  }
  CHECK_THROWS_AS(exact_counting_moment(kSimple, kRad, 40, 1), Error);
  const double th[] = {0.1};
  CHECK_THROWS_AS(exact_char_function(kSimple, kRad, big, th), Error);
  const std::uint64_t bad[] = {4, 2};
  CHECK_THROWS_AS(exact_joint_return(kSimple, kRad, bad), Error);
  const SceneryLaw flt(Pmf({-1, 1}, std::vector<double>{0.5, 0.5}));
  const std::uint64_t t[] = {2};
  CHECK_THROWS_AS(exact_joint_return(kSimple, flt, t, Arithmetic::rational), Error);
  CHECK(exact_joint_return(kSimple, flt, t).method == "double-double");
}

TEST_CASE("order independence across workers") {
  const std::uint64_t t[] = {4, 10};
  auto a = exact_joint_return(kSimple, kTri, t, Arithmetic::floating);
  auto b = exact_joint_return(kSimple, kTri, t, Arithmetic::floating);
  CHECK(a.value == b.value);
}
