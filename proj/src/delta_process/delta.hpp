// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "brownian/brownian.hpp"
#include "simkit/replicate.hpp"

namespace rwrs::delta {

// Delta on the grid t_j = j * dt, j = 0..values.size()-1; values[0] = 0.
struct DeltaPath {
  double dt = 0.0;
  double horizon = 0.0;
  std::uint64_t fineness = 0;
  std::vector<double> values;
};

// Delta_t = sum_x L_t(x) dbeta_x with L from an embedded walk at fineness m and
// i.i.d. N(0, h) increments dbeta; in walk terms m^{-3/4} sum_{i<[mt]} g_{S_i}.
DeltaPath sample_delta_path(double horizon, double dt, std::uint64_t m, simkit::RngStream& rng);

// sum_x L(x) dbeta_x for a frozen field.
double delta_given_field(const brownian::LocalTimeField& field, simkit::RngStream& rng);

// (Delta_{T_1}, ..., Delta_{T_k}): local time first, then N(0, M_{T_1..T_k}).
std::vector<double> sample_delta_marginal(std::span<const double> T_list, std::uint64_t m,
                                          simkit::RngStream& rng);

// Gaussian kernel p_eps(y) = (2 pi eps)^{-1/2} exp(-y^2 / 2 eps).
double heat_kernel(double eps, double y) noexcept;

// Left Riemann sum of int_0^t p_eps(Delta_s - x) ds over the path grid.
double mollified_local_time(const DeltaPath& path, double eps, double t, double x);

// Running values of the same sum at every grid time (index j -> time j*dt).
std::vector<double> mollified_local_time_curve(const DeltaPath& path, double eps, double x);

struct MkEstimate {
  simkit::Estimate value;  // M_{k,t}(0)
  std::uint64_t rejected = 0;
  double rejection_rate = 0.0;
};

// Importance-sampled M_{k,t}(0).  With eps = 0: ordered times from the
// Dirichlet(1/4, ..., 1/4) law of the increment ratios and the scale-free Gram
// matrix; with eps > 0 the smoothed target E[L(eps,t,0)^k] with
// det(M + eps I) and absolute times from Dirichlet(1/4, ..., 1/4, 1).
MkEstimate estimate_Mk(int k, double t, std::uint64_t replicas, std::uint64_t m,
                       std::uint64_t master_seed, std::uint64_t stream_base = 0, double eps = 0.0,
                       bool strict = true);

// Prefactor k! (2 pi)^{-k/2} t^{k/4} Gamma(1/4)^k / Gamma(k/4 + 1).
double mk_prefactor(int k, double t);

//---------------------------------------------------------------------------//
struct BoxCount {
  double scale = 0.0;
  std::uint64_t boxes = 0;   // total boxes at this scale
  std::uint64_t hits = 0;    // boxes meeting the level-set criterion
};

struct BoxCountResult {
  std::vector<BoxCount> table;
  bool degenerate = false;  // no sign change anywhere on the path
  double slope = 0.0;       // OLS slope of log hits vs log(1/scale)
};

// A box of width `scale` counts when the path changes sign in it or, if
// threshold_exponent > 0, when min |Delta| < scale^threshold_exponent there.
BoxCountResult zero_set_boxcount(const DeltaPath& path, std::span<const double> scales,
                                 double threshold_exponent = 0.75);

// Standard Brownian path on the same grid, for calibrating the box counter.
DeltaPath sample_brownian_path(double horizon, double dt, simkit::RngStream& rng);

// 2^-lo, 2^-(lo+1), ..., 2^-hi.
std::vector<double> dyadic_scales(int lo, int hi);

enum class PathKind { delta, brownian };

struct SlopeSummary {
  simkit::Estimate mean_slope;  // over non-degenerate paths
  std::uint64_t degenerate = 0;
};

// Box-count slopes of independent paths on [0, 1].  The fineness m is used for
// delta paths only.
SlopeSummary boxcount_slopes(PathKind kind, std::uint64_t paths, double dt, std::uint64_t m,
                             std::span<const double> scales, double threshold_exponent,
                             std::uint64_t master_seed, std::uint64_t stream_base = 0);

//---------------------------------------------------------------------------//
struct OccupationCheck {
  simkit::Estimate occupation;  // time in [a, b) up to 1
  simkit::Estimate mollified;   // int_a^b L(eps, 1, x) dx
  double rel_error = 0.0;       // |mollified / occupation - 1|
};

OccupationCheck occupation_identity(double a, double b, double eps, std::uint64_t paths,
                                    double dt, std::uint64_t m, std::uint64_t master_seed,
                                    std::uint64_t stream_base = 0);

struct HolderMoments {
  std::vector<double> lags;   // 2^-lag_lo .. 2^-lag_hi
  std::vector<double> space;  // E (L(eps,1,lag) - L(eps,1,0))^2
  std::vector<double> time;   // E L(eps,lag,0)^2
  double space_slope = 0.0;   // log-log OLS slopes
  double time_slope = 0.0;
};

HolderMoments holder_moments(double eps, std::uint64_t paths, double dt, std::uint64_t m,
                             std::uint64_t master_seed, std::uint64_t stream_base = 0,
                             int lag_lo = 3, int lag_hi = 8);

// E[L(eps, t, 0)^k] from path Riemann sums.
simkit::Estimate smoothed_moment_path(int k, double eps, double t, std::uint64_t paths, double dt,
                                      std::uint64_t m, std::uint64_t master_seed,
                                      std::uint64_t stream_base = 0);

}  // namespace rwrs::delta
