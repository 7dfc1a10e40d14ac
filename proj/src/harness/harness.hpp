// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "harness/stats.hpp"
#include "lattice_walk/walk.hpp"
#include "scenery/law.hpp"
#include "simkit/replicate.hpp"

namespace rwrs::harness {

enum class Estimator { conditional, indicator };

struct CurvePoint {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> times;  // cumulative return times [n T_i]
  simkit::Estimate estimate;
};

struct ReturnCurve {
  std::vector<CurvePoint> points;
  std::optional<ScalingFit> fit;  // present with >= 3 positive points
};

// Times ([n T_1], ..., [n T_k]) rounded down to multiples of d0.
// Errors: T not increasing or positive, or a rounded time collapsing.
std::vector<std::uint64_t> admissible_times(std::uint64_t n, std::span<const double> T_ratios,
                                            std::int64_t d0);

// Errors: n_list not increasing, or some n not in d0 Z unless
// allow_inadmissible (then those points are estimated and reported as is).
ReturnCurve estimate_return_curve(const lattice::StepLaw& step, const scenery::SceneryLaw& scen,
                                  std::span<const std::uint64_t> n_list,
                                  std::span<const double> T_ratios, std::uint64_t walk_replicas,
                                  std::uint64_t master_seed, std::uint64_t stream_base = 0,
                                  Estimator estimator = Estimator::conditional,
                                  bool allow_inadmissible = false);

//---------------------------------------------------------------------------//
// Delta-method ratio mean(num) / (mean(den_1) * ... ) from per-replica columns.
simkit::Estimate ratio_estimate(std::span<const std::vector<double>> columns,
                                std::uint64_t master_seed);

struct CorrelationRatio {
  simkit::Estimate lhs;  // walk side at n
  simkit::Estimate rhs;  // Brownian side at fineness m
  std::uint64_t rejected = 0;
};

// lhs = P(Z_n = 0, Z_{n+n'} - Z_n = 0) / (P(Z_n = 0) P(Z_{n'} = 0)), n' = [n t];
// rhs = E[(|L_1|^2 |L~_t|^2 - <L_1, L~_t>^2)^{-1/2}] / E[(|L_1| |L~_t|)^{-1}].
// Errors: n or n' not admissible -> invalid-argument; a denominator within
// 3 standard errors of 0 -> degenerate.
CorrelationRatio correlation_ratio(std::uint64_t n, double t_ratio, std::uint64_t replicas,
                                   std::uint64_t master_seed, std::uint64_t fineness = 1u << 16,
                                   std::uint64_t brownian_replicas = 0,
                                   const lattice::StepLaw& step = lattice::StepLaw::simple(),
                                   const scenery::SceneryLaw& scen = scenery::SceneryLaw::rademacher());

// Only the Brownian side, for diagnostics at several t.
simkit::Estimate correlation_rhs(double t_ratio, std::uint64_t replicas, std::uint64_t fineness,
                                 std::uint64_t master_seed, std::uint64_t stream_base,
                                 std::uint64_t* rejected = nullptr);

//---------------------------------------------------------------------------//
// Return counts N_t(0) = #{1 <= m <= t : Z_m = 0} at each sorted record time,
// one column per time, one nested trajectory per replica.
std::vector<std::vector<double>> return_counts(const lattice::StepLaw& step,
                                               const scenery::SceneryLaw& scen,
                                               std::span<const std::uint64_t> record_times,
                                               std::uint64_t replicas, std::uint64_t master_seed,
                                               std::uint64_t stream_base = 0);

struct CountingCurve {
  int k = 1;
  std::vector<CurvePoint> points;  // E[N_n(0)^k]
  std::optional<ScalingFit> fit;
  // (E N_{n_J}^k - E N_{n_{J-1}}^k) / (n_J^{k/4} - n_{J-1}^{k/4}) over the two
  // largest n, which cancels the additive lower-order term.
  simkit::Estimate constant;
  double law_factor = 1.0;  // (d / (sigma d0))^k
};

CountingCurve counting_moment_curve(const lattice::StepLaw& step, const scenery::SceneryLaw& scen,
                                    int k, std::span<const std::uint64_t> n_list,
                                    std::uint64_t replicas, std::uint64_t master_seed,
                                    std::uint64_t stream_base = 0);

struct ShadowCell {
  std::uint64_t a = 0, b = 0;  // (n1, n2) or (n, h index)
  simkit::Estimate value;
};

struct ShadowReport {
  std::vector<ShadowCell> cells;
  double max_upper = 0.0;  // max of value + 3 std_error
  double budget = 0.0;
  bool pass = false;
};

// E[(N_{[n(t+h)]} - N_{[nt]})^2] / (h^{1/2} n^{1/2}) for each h.
ShadowReport tightness_shadow(const lattice::StepLaw& step, const scenery::SceneryLaw& scen,
                              std::uint64_t n, double t, std::span<const double> hs,
                              std::uint64_t replicas, double budget, std::uint64_t master_seed,
                              std::uint64_t stream_base = 0);

// P(Z_{n1} = 0, Z_{n1+n2} = 0) (n1 n2)^{3/4} over a geometric grid of
// admissible n1, n2 in [n^theta, n] with per_axis values each.
ShadowReport uniformity_shadow(const lattice::StepLaw& step, const scenery::SceneryLaw& scen,
                               std::uint64_t n, int per_axis, std::uint64_t replicas,
                               double budget, std::uint64_t master_seed,
                               std::uint64_t stream_base = 0, double theta = 0.5);

//---------------------------------------------------------------------------//
// Entries (i <= j, row major) of sigma n^{-3/2} <N_{[nT_i]}, N_{[nT_j]}>.
std::vector<std::vector<double>> walk_gram_samples(const lattice::StepLaw& step, std::uint64_t n,
                                                   std::span<const double> T_list,
                                                   std::uint64_t replicas,
                                                   std::uint64_t master_seed,
                                                   std::uint64_t stream_base = 0);
// Same entries of h sum L_{T_i} L_{T_j} from the Brownian sampler.
std::vector<std::vector<double>> brownian_gram_samples(std::span<const double> T_list,
                                                       std::uint64_t replicas,
                                                       std::uint64_t fineness,
                                                       std::uint64_t master_seed,
                                                       std::uint64_t stream_base = 0);

// Two-sample KS per entry; threshold 0 means the 1e-3 asymptotic quantile.
std::vector<TestReport> gram_convergence_test(const lattice::StepLaw& step, std::uint64_t n,
                                              std::span<const double> T_list,
                                              std::uint64_t replicas, std::uint64_t fineness,
                                              std::uint64_t master_seed, double threshold = 0.0);

// KS between L(eps T^{3/2}, T, 0) and T^{1/4} L(eps, 1, 0).
TestReport scaling_law_test(double T, std::uint64_t replicas, std::uint64_t master_seed,
                            double eps = 0.05, std::uint64_t fineness = 1u << 12,
                            double dt = 1.0 / 4096.0, double threshold = 0.0);

}  // namespace rwrs::harness
