// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include "lattice_walk/pmf.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>
#include <sstream>

#include "simkit/error.hpp"

namespace rwrs::lattice {

using boost::multiprecision::cpp_rational;

std::int64_t gcd_all(const std::vector<std::int64_t>& xs) {
  std::int64_t g = 0;
  for (auto x : xs) g = std::gcd(g, x < 0 ? -x : x);
  return g;
}

namespace {

void check_support(const std::vector<std::int64_t>& support, std::size_t nprobs) {
  require(!support.empty(), "pmf support is empty");
  require(support.size() == nprobs, "pmf support and probs differ in length");
  for (std::size_t i = 1; i < support.size(); ++i)
    require(support[i - 1] < support[i], "pmf support must be sorted and distinct");
  for (auto s : support)
    require(s > -(std::int64_t{1} << 30) && s < (std::int64_t{1} << 30),
            "pmf support value out of range");
}

}  // namespace

Pmf::Pmf(std::vector<std::int64_t> support, std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  check_support(support_, probs_.size());
  double total = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    require(std::isfinite(probs_[i]) && probs_[i] > 0.0, "pmf probabilities must be positive");
    total += probs_[i];
    mean += probs_[i] * static_cast<double>(support_[i]);
  }
  require(std::fabs(total - 1.0) <= 1e-12, "pmf probabilities must sum to 1");
  double scale = 0.0;
  for (auto s : support_) scale = std::max(scale, std::fabs(static_cast<double>(s)));
  require(std::fabs(mean) <= 1e-12 * std::max(1.0, scale), "pmf must be centered (mean 0)");
  finish();
}

Pmf::Pmf(std::vector<std::int64_t> support, std::vector<Ratio> probs)
    : support_(std::move(support)) {
  check_support(support_, probs.size());
  cpp_rational total = 0, mean = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    require(probs[i].den > 0 && probs[i].num > 0, "pmf probabilities must be positive");
    cpp_rational p(probs[i].num, probs[i].den);
    total += p;
    mean += p * support_[i];
  }
  require(total == 1, "pmf probabilities must sum to exactly 1");
  require(mean == 0, "pmf must be centered (mean exactly 0)");
  probs_.reserve(probs.size());
  for (auto& r : probs) probs_.push_back(r.to_double());
  rational_ = std::move(probs);
  finish();
}

void Pmf::finish() {
  variance_ = 0.0;
  max_abs_ = 0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    const double s = static_cast<double>(support_[i]);
    variance_ += probs_[i] * s * s;
    max_abs_ = std::max(max_abs_, support_[i] < 0 ? -support_[i] : support_[i]);
  }
  rademacher_ = support_.size() == 2 && support_[0] == -1 && support_[1] == 1 &&
                probs_[0] == 0.5 && probs_[1] == 0.5;

  // Vose alias table.
  const std::size_t k = probs_.size();
  alias_prob_.assign(k, 1.0);
  alias_.assign(k, 0);
  std::vector<double> scaled(k);
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < k; ++i) {
    scaled[i] = probs_[i] * static_cast<double>(k);
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    alias_prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (auto i : large) alias_prob_[i] = 1.0;
  for (auto i : small) alias_prob_[i] = 1.0;
}

std::size_t Pmf::sample_index(simkit::RngStream& rng) const noexcept {
  if (rademacher_) return rng.bit() ? 1 : 0;
  const auto i = static_cast<std::size_t>(rng.below(support_.size()));
  if (alias_prob_[i] >= 1.0) return i;
  return rng.uniform() < alias_prob_[i] ? i : alias_[i];
}

std::string Pmf::describe() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (i) os << ", ";
    os << support_[i] << ':';
    if (rational_)
      os << (*rational_)[i].num << '/' << (*rational_)[i].den;
    else
      os << probs_[i];
  }
  os << '}';
  return os.str();
}

}  // namespace rwrs::lattice
