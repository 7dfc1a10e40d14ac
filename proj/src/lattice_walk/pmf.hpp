// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "simkit/rng.hpp"

namespace rwrs::lattice {

// p = num / den, den > 0.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Ratio&) const = default;
};

//---------------------------------------------------------------------------//
/*!
 * Finite-support integer pmf, centered and normalized.
 *
 * Construction validates: sorted distinct support, positive probabilities,
 * total mass 1 (exactly when rational, else within 1e-12) and zero mean
 * (exactly when rational).  Sampling uses an alias table.
 */
class Pmf {
 public:
  Pmf() = default;
  Pmf(std::vector<std::int64_t> support, std::vector<double> probs);
  Pmf(std::vector<std::int64_t> support, std::vector<Ratio> probs);

  const std::vector<std::int64_t>& support() const noexcept { return support_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  const std::optional<std::vector<Ratio>>& rational_probs() const noexcept {
    return rational_;
  }
  std::size_t size() const noexcept { return support_.size(); }
  double variance() const noexcept { return variance_; }
  std::int64_t max_abs() const noexcept { return max_abs_; }
  std::int64_t min_value() const noexcept { return support_.front(); }
  std::int64_t max_value() const noexcept { return support_.back(); }

  // Index into support() drawn with probability probs()[i].
  std::size_t sample_index(simkit::RngStream& rng) const noexcept;
  std::int64_t sample(simkit::RngStream& rng) const noexcept {
    return support_[sample_index(rng)];
  }

  // True for {-1: 1/2, +1: 1/2}.
  bool is_rademacher() const noexcept { return rademacher_; }

  std::string describe() const;

 private:
  void finish();

  std::vector<std::int64_t> support_;
  std::vector<double> probs_;
  std::optional<std::vector<Ratio>> rational_;
  std::vector<double> alias_prob_;
  std::vector<std::uint32_t> alias_;
  double variance_ = 0.0;
  std::int64_t max_abs_ = 0;
  bool rademacher_ = false;
};

std::int64_t gcd_all(const std::vector<std::int64_t>& xs);

}  // namespace rwrs::lattice
