// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include "scenery/law.hpp"

#include <cmath>
#include <numeric>

#include "simkit/error.hpp"

namespace rwrs::scenery {

LawConstants analyze_law(const lattice::Pmf& pmf) {
  require(pmf.size() >= 2, "scenery law is degenerate (single point)");
  const auto& s = pmf.support();
  std::int64_t d = 0;
  for (std::size_t i = 1; i < s.size(); ++i) d = std::gcd(d, s[i] - s[0]);
  LawConstants c;
  c.sigma2 = pmf.variance();
  c.d = d;
  c.residue = ((s[0] % d) + d) % d;
  c.d0 = c.residue == 0 ? 1 : d / std::gcd(c.residue, d);
  return c;
}

SceneryLaw::SceneryLaw(lattice::Pmf pmf) : pmf_(std::move(pmf)), c_(analyze_law(pmf_)) {
  const auto& s = pmf_.support();
  const auto& p = pmf_.probs();
  symmetric_ = true;
  for (std::size_t i = 0, j = s.size() - 1; i < s.size(); ++i, --j)
    if (s[i] != -s[j] || p[i] != p[j]) symmetric_ = false;
}

SceneryLaw SceneryLaw::rademacher() {
  return SceneryLaw(lattice::Pmf({-1, 1}, std::vector<lattice::Ratio>{{1, 2}, {1, 2}}));
}

double SceneryLaw::sigma() const noexcept { return std::sqrt(c_.sigma2); }

std::complex<double> SceneryLaw::phi(double u) const noexcept {
  const auto& s = pmf_.support();
  const auto& p = pmf_.probs();
  if (symmetric_) {
    double re = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) re += p[i] * std::cos(u * static_cast<double>(s[i]));
    return {re, 0.0};
  }
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double a = u * static_cast<double>(s[i]);
    re += p[i] * std::cos(a);
    im += p[i] * std::sin(a);
  }
  return {re, im};
}

bool SceneryLaw::in_coset(std::int64_t target, std::uint64_t n) const noexcept {
  const std::int64_t d = c_.d;
  const auto nm = static_cast<std::int64_t>(n % static_cast<std::uint64_t>(d));
  const std::int64_t want = (c_.residue * nm) % d;
  return ((target % d) + d) % d == want;
}

}  // namespace rwrs::scenery
