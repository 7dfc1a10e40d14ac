// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "lattice_walk/walk.hpp"
#include "scenery/law.hpp"

namespace rwrs::scenery {

struct ConditionalMethod {
  enum class Tag { convolution, char_quadrature };
  Tag tag = Tag::char_quadrature;
  std::uint64_t node_count = 64;  // minimum trapezoid nodes per dimension

  static ConditionalMethod convolution() { return {Tag::convolution, 64}; }
  static ConditionalMethod char_quadrature(std::uint64_t nodes = 64);
};

// Z increments at each segment: sum_y xi_y N_i(y), with one xi per site shared
// across segments.  Sites are drawn in increasing order over the union.
std::vector<std::int64_t> sample_and_evaluate(std::span<const lattice::LocalTimeProfile> profiles,
                                              const SceneryLaw& law, simkit::RngStream& rng);

// Same with a fixed scenery assignment (xi(site)).
template <class Xi>
std::vector<std::int64_t> evaluate_with(std::span<const lattice::LocalTimeProfile> profiles,
                                        Xi&& xi) {
  std::vector<std::int64_t> z(profiles.size(), 0);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& p = profiles[i];
    const auto c = p.dense();
    for (std::size_t k = 0; k < c.size(); ++k)
      if (c[k]) z[i] += static_cast<std::int64_t>(c[k]) * xi(p.min_site() + static_cast<std::int64_t>(k));
  }
  return z;
}

// P(all k increments = 0 | walk).  Exactly 0 when some n_i is not in d0 Z.
double conditional_return_prob(std::span<const lattice::LocalTimeProfile> profiles,
                               const SceneryLaw& law, const ConditionalMethod& method);

//---------------------------------------------------------------------------//
// Histogram of visit counts: entries (c, h) meaning h sites visited c times.
struct CountHistogram {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;
  std::uint64_t mass = 0;  // sum c*h
  double energy = 0.0;     // sum c^2*h
  void add(std::uint32_t c, std::uint32_t h = 1);
  void finalize();  // merges duplicates, orders for fastest decay
};

CountHistogram histogram_of(const lattice::LocalTimeProfile& p);

//---------------------------------------------------------------------------//
/*!
 * Point probabilities of A = sum_y xi_y c_y for a fixed count histogram.
 *
 * Trapezoid inversion of phi_A on the period [0, 2 pi/d) with M nodes.  The
 * rule returns sum_l P(A = a + l d M), so M is chosen from a Hoeffding tail
 * bound (or the exact span when smaller) to push aliasing below tol.  Nodes
 * where |phi_A| < 1e-18 are dropped; the rest are cached so that many targets
 * cost one pass over the surviving nodes each.
 */
class PointInversion {
 public:
  PointInversion(const SceneryLaw& law, const CountHistogram& hist,
                 std::int64_t max_abs_target, std::uint64_t min_nodes = 64,
                 double tol = 1e-13);

  double prob(std::int64_t a) const noexcept;
  std::uint64_t nodes() const noexcept { return m_; }
  std::size_t surviving() const noexcept { return kept_.size(); }

  // Same inversion with 2M nodes, reusing the even nodes.
  PointInversion refined() const;

 private:
  PointInversion(const SceneryLaw& law, const CountHistogram& hist, std::uint64_t m);
  void evaluate(std::uint64_t j_begin, std::uint64_t j_end, std::uint64_t j_step);
  std::complex<double> phi_at(double theta) const noexcept;

  const SceneryLaw* law_;
  const CountHistogram* hist_;
  std::uint64_t m_ = 0;
  std::uint64_t mass_ = 0;
  struct Node {
    std::uint64_t j;
    std::complex<double> phi;
  };
  std::vector<Node> kept_;
};

// Unbiased Rao-Blackwell estimator of P(all increments = 0 | walk) for k >= 1
// segments: draws xi on sites visited by two or more segments, then
// integrates the exclusive sites exactly.  For k = 1 it is the exact
// conditional probability.  The number of shared-scenery draws is inner_draws
// times ceil(sqrt(shared / exclusive variance)) of the worst segment, capped at
// kMaxDrawFactor; segments with little exclusive mass have spiky conditionals.
// The count depends on the walk only, so the estimate stays unbiased.
inline constexpr int kMaxDrawFactor = 64;

double split_conditional_estimate(std::span<const lattice::LocalTimeProfile> profiles,
                                  const SceneryLaw& law, simkit::RngStream& rng,
                                  int inner_draws = 16);

// Indicator of all increments = 0 under one scenery draw.
double indicator_estimate(std::span<const lattice::LocalTimeProfile> profiles,
                          const SceneryLaw& law, simkit::RngStream& rng);

}  // namespace rwrs::scenery
