// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "simkit/replicate.hpp"
#include "simkit/rng.hpp"

namespace rwrs::brownian {

//---------------------------------------------------------------------------//
/*!
 * Brownian local time on the grid x_j = (origin_index + j) * h, h = m^{-1/2},
 * from an embedded simple walk: L_T(x_j) = N_{[mT]}(origin_index + j) / sqrt(m).
 */
struct LocalTimeField {
  std::int64_t origin_index = 0;
  double h = 1.0;
  std::vector<double> values;
  double horizon = 0.0;  // T for cumulative fields, T_i - T_{i-1} for increments
  std::uint64_t fineness = 1;

  double origin() const noexcept { return static_cast<double>(origin_index) * h; }
  double mass() const noexcept;  // h * sum values
  double at(std::int64_t index) const noexcept;
};

struct FieldSample {
  std::vector<LocalTimeField> cumulative;  // L_{T_i}
  std::vector<LocalTimeField> increments;  // L_{T_i} - L_{T_{i-1}}
};

inline constexpr std::uint64_t kMinFineness = 1000;

// One Brownian path, observed at T_1 < ... < T_k.  All fields share a grid.
FieldSample sample_local_time_fields(std::span<const double> T_list, std::uint64_t m,
                                     simkit::RngStream& rng);

// Pads fields (same h) onto the union of their windows.
std::vector<LocalTimeField> on_common_grid(std::span<const LocalTimeField> fields);

enum class GramNormalization { raw, scaled };

struct GramSample {
  std::size_t k = 0;
  std::vector<double> entries;  // row major k x k
  double det = 0.0;
  double lambda_min = 0.0;
  double at(std::size_t i, std::size_t j) const noexcept { return entries[i * k + j]; }
  double diag_product() const noexcept;
};

// Eigen-decomposition based det and smallest eigenvalue, eigenvalues below
// 1e-14 * trace clamped to zero.
GramSample gram_from_entries(std::size_t k, std::vector<double> entries);
GramSample gram_of_fields(std::span<const LocalTimeField> fields, GramNormalization norm);

struct CEstimate {
  simkit::Estimate c;            // E[D^{-1/2}] over accepted replicas
  simkit::Estimate bound_ratio;  // c * prod (T_i - T_{i-1})^{3/4}
  std::uint64_t rejected = 0;
  double rejection_rate = 0.0;
};

inline constexpr double kMaxRejectionRate = 1e-3;

// Errors: rejection rate above 0.1% -> numerical error when strict.
CEstimate estimate_C(std::span<const double> T_list, std::uint64_t replicas, std::uint64_t m,
                     std::uint64_t master_seed, std::uint64_t stream_base = 0, bool strict = true);

// True when det is at or below the round-off floor relative to the diagonal.
bool near_singular(const GramSample& g) noexcept;

//---------------------------------------------------------------------------//
// BESQ0 transition over dt: Poisson(y / 2dt) mixture of Gamma(K, 2dt).
double besq0_step(double y, double dt, simkit::RngStream& rng);
// Density of the absolutely continuous part of the BESQ0 transition.
double besq0_density(double eps, double y, double z);
// Mass of the atom at zero, exp(-y / 2dt).
double besq0_atom(double y, double dt);

// Integral of a BESQ0 path from y: (y/2)^2 / Z^2.
double besq0_total_integral(double y, simkit::RngStream& rng);
// Density and CDF of that integral (hitting time of y/2).
double hitting_density(double y, double t);
double hitting_cdf(double y, double t);
// Euler-free check: integrates an exactly sampled BESQ0 path on a grid dx.
double besq0_path_integral(double y, double dx, simkit::RngStream& rng);

// Local-time profile y -> L_tau(y) / sqrt(m), y = 0..x_max*sqrt(m) lattice
// offsets, where tau is the first time the walk's visit count at 0 exceeds
// level * sqrt(m).  Negative-side excursions are collapsed into a visit at 0,
// excursions above the window into a visit at its top.
std::vector<double> ray_knight_profile(double level, std::uint64_t m, double x_max,
                                       simkit::RngStream& rng);

inline constexpr std::uint64_t kRayKnightStepCap = 1'000'000'000;

// Visits to 0 before |S| reaches sqrt(m), divided by sqrt(m).
double exit_local_time(std::uint64_t m, simkit::RngStream& rng);

}  // namespace rwrs::brownian
