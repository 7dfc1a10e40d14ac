// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <functional>

#include "doctest.h"
#include "scenery/conditional.hpp"
#include "simkit/error.hpp"
#include "simkit/replicate.hpp"

using namespace rwrs;
using namespace rwrs::scenery;
using lattice::LocalTimeProfile;
using lattice::Pmf;
using lattice::Ratio;
using lattice::StepLaw;

namespace {

std::vector<SceneryLaw> test_laws() {
  return {
      SceneryLaw::rademacher(),
      SceneryLaw(Pmf({-1, 0, 1}, std::vector<Ratio>{{1, 4}, {1, 2}, {1, 4}})),
      SceneryLaw(Pmf({-2, 2}, std::vector<Ratio>{{1, 2}, {1, 2}})),
      SceneryLaw(Pmf({-2, 1}, std::vector<Ratio>{{1, 3}, {2, 3}})),
      SceneryLaw(Pmf({-3, 1, 5}, std::vector<Ratio>{{5, 12}, {5, 12}, {2, 12}})),
  };
}

// P(sum xi_y c_y = 0) by enumerating every scenery assignment.
double brute_force(const LocalTimeProfile& p, const SceneryLaw& law) {
  std::vector<std::uint64_t> counts;
  for (auto c : p.dense())
    if (c) counts.push_back(c);
  const auto& sup = law.pmf().support();
  const auto& pr = law.pmf().probs();
  double total = 0.0;
  std::function<void(std::size_t, std::int64_t, double)> rec = [&](std::size_t i, std::int64_t z,
                                                                   double w) {
    if (i == counts.size()) {
      if (z == 0) total += w;
      return;
    }
    for (std::size_t s = 0; s < sup.size(); ++s)
      rec(i + 1, z + sup[s] * static_cast<std::int64_t>(counts[i]), w * pr[s]);
  };
  rec(0, 0, 1.0);
  return total;
}

LocalTimeProfile random_profile(simkit::RngStream& rng, std::uint64_t max_len,
                                const StepLaw& law = StepLaw::simple()) {
  const std::uint64_t n = 1 + rng.below(max_len);
  const std::uint64_t b[] = {n};
  return lattice::simulate_local_times(law, b, rng)[0];
}

}  // namespace

TEST_CASE("analyze_law constants") {
  auto c = analyze_law(Pmf({-1, 1}, std::vector<double>{0.5, 0.5}));
  CHECK(c.sigma2 == doctest::Approx(1.0));
  CHECK(c.d == 2);
  CHECK(c.d0 == 2);
  c = analyze_law(Pmf({-1, 0, 1}, std::vector<double>{0.25, 0.5, 0.25}));
  CHECK(c.sigma2 == doctest::Approx(0.5));
  CHECK(c.d == 1);
  CHECK(c.d0 == 1);
  c = analyze_law(Pmf({-2, 2}, std::vector<double>{0.5, 0.5}));
  CHECK(c.sigma2 == doctest::Approx(4.0));
  CHECK(c.d == 4);
  CHECK(c.d0 == 2);
  CHECK_THROWS_AS(analyze_law(Pmf({0}, std::vector<double>{1.0})), Error);
  CHECK_THROWS_AS(SceneryLaw(Pmf({-1, 3}, std::vector<double>{0.5, 0.5})), Error);
}

TEST_CASE("footnote identity: n xi in dZ a.s. iff n in d0 Z") {
  for (const auto& law : test_laws()) {
    const auto d = law.d();
    for (std::int64_t n = 1; n <= 4 * d; ++n) {
      bool all = true;
      for (auto s : law.pmf().support()) all = all && ((n * s) % d == 0);
      CHECK(all == (n % law.d0() == 0));
    }
  }
}

TEST_CASE("characteristic function has modulus one exactly on (2pi/d)Z") {
  for (const auto& law : test_laws()) {
    const double step = 2.0 * M_PI / static_cast<double>(law.d());
    for (int l = -3; l <= 3; ++l) CHECK(std::abs(law.phi(l * step)) == doctest::Approx(1.0));
    for (int i = 1; i < 50; ++i) {
      const double u = step * i / 50.0;
      CHECK(std::abs(law.phi(u)) < 1.0 - 1e-9);
    }
  }
}

TEST_CASE("Z evaluation") {
  auto p = LocalTimeProfile::from_map(0, {{0, 3}, {1, 1}, {-1, 1}});
  const LocalTimeProfile ps[] = {p};
  auto z = evaluate_with(ps, [](std::int64_t y) -> std::int64_t {
    return y == 0 ? 1 : (y == 1 ? -1 : 2);
  });
  CHECK(z[0] == 4);

  const auto law = SceneryLaw::rademacher();
  for (int t = 0; t < 1000; ++t) {
    auto rng = simkit::derive_stream(8, static_cast<std::uint64_t>(t));
    auto prof = random_profile(rng, 200);
    const LocalTimeProfile one[] = {prof};
    auto v = sample_and_evaluate(one, law, rng);
    CHECK(((v[0] - static_cast<std::int64_t>(prof.length())) % 2 + 2) % 2 == 0);
  }

  // Shared site 0: flipping xi_0 moves both increments by 2 N_i(0).
  auto a = LocalTimeProfile::from_map(0, {{0, 2}, {1, 1}});
  auto b = LocalTimeProfile::from_map(1, {{0, 1}, {1, 3}});
  const LocalTimeProfile ab[] = {a, b};
  auto plus = evaluate_with(ab, [](std::int64_t) -> std::int64_t { return 1; });
  auto minus = evaluate_with(ab, [](std::int64_t y) -> std::int64_t { return y == 0 ? -1 : 1; });
  CHECK(plus[0] - minus[0] == 2 * 2);
  CHECK(plus[1] - minus[1] == 2 * 1);
}

TEST_CASE("conditional_return_prob examples") {
  const auto law = SceneryLaw::rademacher();
  const auto conv = ConditionalMethod::convolution();
  const auto quad = ConditionalMethod::char_quadrature(64);
  const LocalTimeProfile two[] = {LocalTimeProfile::from_map(0, {{0, 1}, {1, 1}})};
  CHECK(conditional_return_prob(two, law, conv) == 0.5);
  CHECK(conditional_return_prob(two, law, quad) == doctest::Approx(0.5).epsilon(1e-12));
  const LocalTimeProfile lazy[] = {LocalTimeProfile::from_map(0, {{0, 2}})};
  CHECK(conditional_return_prob(lazy, law, conv) == 0.0);
  CHECK(conditional_return_prob(lazy, law, quad) < 1e-15);
  const LocalTimeProfile odd[] = {LocalTimeProfile::from_map(0, {{0, 2}, {1, 1}})};
  CHECK(conditional_return_prob(odd, law, conv) == 0.0);
  CHECK(conditional_return_prob(odd, law, quad) == 0.0);
  const LocalTimeProfile three[] = {two[0], two[0], two[0]};
  CHECK_THROWS_AS(conditional_return_prob(three, law, conv), Error);
  try {
    conditional_return_prob(three, law, conv);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unsupported_method);
  }
  CHECK_NOTHROW(conditional_return_prob(three, law, quad));
  CHECK_THROWS_AS(ConditionalMethod::char_quadrature(63), Error);
  CHECK_THROWS_AS(ConditionalMethod::char_quadrature(32), Error);
}

TEST_CASE("k=1 conditional matches scenery enumeration") {
  const StepLaw lazy(Pmf({-1, 0, 1}, std::vector<Ratio>{{1, 3}, {1, 3}, {1, 3}}));
  for (const auto& law : test_laws()) {
    if (law.pmf().size() > 3) continue;
    for (int t = 0; t < 60; ++t) {
      auto rng = simkit::derive_stream(12, static_cast<std::uint64_t>(t));
      auto prof = random_profile(rng, 30, t % 2 ? lazy : StepLaw::simple());
      std::uint64_t occupied = 0;
      for (auto c : prof.dense()) occupied += c > 0;
      if (occupied > 12) continue;
      const LocalTimeProfile one[] = {prof};
      const double want = brute_force(prof, law);
      CHECK(conditional_return_prob(one, law, ConditionalMethod::convolution()) ==
            doctest::Approx(want).epsilon(1e-12));
      CHECK(std::fabs(conditional_return_prob(one, law, ConditionalMethod::char_quadrature()) - want) <
            1e-12);
    }
  }
}

TEST_CASE("k=2 convolution agrees with quadrature") {
  for (const auto& law : {test_laws()[0], test_laws()[1], test_laws()[3]}) {
    for (int t = 0; t < 100; ++t) {
      auto rng = simkit::derive_stream(13, static_cast<std::uint64_t>(t));
      const std::uint64_t n1 = 2 + 2 * rng.below(16), n2 = 2 + 2 * rng.below(16);
      const std::uint64_t b[] = {n1, n1 + n2};
      auto prof = lattice::simulate_local_times(StepLaw::simple(), b, rng);
      const double a = conditional_return_prob(prof, law, ConditionalMethod::convolution());
      const double q = conditional_return_prob(prof, law, ConditionalMethod::char_quadrature());
      CHECK(std::fabs(a - q) < 1e-8);
    }
  }
}

TEST_CASE("vanishing off d0 Z for both methods") {
  for (const auto& law : test_laws()) {
    if (law.d0() == 1) continue;
    for (int t = 0; t < 30; ++t) {
      auto rng = simkit::derive_stream(14, static_cast<std::uint64_t>(t));
      std::uint64_t n = 1 + rng.below(40);
      if (n % law.d0() == 0) ++n;
      const std::uint64_t b[] = {n};
      auto prof = lattice::simulate_local_times(StepLaw::simple(), b, rng);
      CHECK(conditional_return_prob(prof, law, ConditionalMethod::convolution()) == 0.0);
      CHECK(conditional_return_prob(prof, law, ConditionalMethod::char_quadrature()) == 0.0);
      CHECK(split_conditional_estimate(prof, law, rng) == 0.0);
    }
  }
}

TEST_CASE("point inversion matches convolution at moderate n") {
  const auto law = test_laws()[4];  // asymmetric, d = 4, d0 = 4
  for (int t = 0; t < 5; ++t) {
    auto rng = simkit::derive_stream(15, static_cast<std::uint64_t>(t));
    const std::uint64_t b[] = {400};
    auto prof = lattice::simulate_local_times(StepLaw::simple(), b, rng);
    const double a = conditional_return_prob(prof, law, ConditionalMethod::convolution());
    const double q = conditional_return_prob(prof, law, ConditionalMethod::char_quadrature());
    CHECK(a > 0.0);
    CHECK(std::fabs(a - q) < 1e-12);
  }
}

TEST_CASE("split estimator is unbiased and beats the indicator") {
  const auto law = SceneryLaw::rademacher();
  const std::uint64_t b[] = {8, 24};
  auto exact_given = [&](std::uint64_t i) {
    auto rng = simkit::derive_stream(16, i);
    auto prof = lattice::simulate_local_times(StepLaw::simple(), b, rng);
    return conditional_return_prob(prof, law, ConditionalMethod::convolution());
  };
  auto split = [&](std::uint64_t i) {
    auto rng = simkit::derive_stream(16, i);
    auto prof = lattice::simulate_local_times(StepLaw::simple(), b, rng);
    return split_conditional_estimate(prof, law, rng, 4);
  };
  auto indicator = [&](std::uint64_t i) {
    auto rng = simkit::derive_stream(16, i);
    auto prof = lattice::simulate_local_times(StepLaw::simple(), b, rng);
    return indicator_estimate(prof, law, rng);
  };
  const std::uint64_t R = 20000;
  std::vector<double> e(R), s(R), ind(R);
  for (std::uint64_t i = 0; i < R; ++i) {
    e[i] = exact_given(i);
    s[i] = split(i);
    ind[i] = indicator(i);
  }
  auto est_e = simkit::summarize(e, 16), est_s = simkit::summarize(s, 16),
       est_i = simkit::summarize(ind, 16);
  CHECK(est_e.std_error < est_s.std_error);
  CHECK(est_s.std_error < est_i.std_error);
  // Same walk replicas: split minus exact has mean zero.
  std::vector<double> diff(R);
  for (std::uint64_t i = 0; i < R; ++i) diff[i] = s[i] - e[i];
  auto dd = simkit::summarize(diff, 16);
  CHECK(std::fabs(dd.value) < 4 * dd.std_error + 1e-15);
  CHECK(std::fabs(est_i.value - est_e.value) < 4 * est_i.std_error);
}
