// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>

#include "lattice_walk/walk.hpp"
#include "scenery/law.hpp"

namespace rwrs::oracle {

enum class Arithmetic {
  automatic,  // rational when both laws carry rational probabilities
  floating,   // double-double accumulation
  rational,   // exact; invalid-argument if a law is not rational
};

struct ExactResult {
  double value = 0.0;
  std::uint64_t path_count = 0;  // |support(step)|^{n_k}
  std::string method;            // "rational" or "double-double"
  std::string exact;             // "p/q" in rational mode, empty otherwise
};

inline constexpr double kPathBudget = 1e8;

// P(Z_{n_1} = ... = Z_{n_k} = 0) by enumerating every walk path of n_k steps
// and integrating the scenery exactly given the path.
ExactResult exact_joint_return(const lattice::StepLaw& step, const scenery::SceneryLaw& scen,
                               std::span<const std::uint64_t> times,
                               Arithmetic arith = Arithmetic::automatic);

// Same probability by direct enumeration of (path, scenery) pairs, sites'
// values assigned lazily on first visit.  Independent cross-check.
ExactResult exact_joint_return_by_pairs(const lattice::StepLaw& step,
                                        const scenery::SceneryLaw& scen,
                                        std::span<const std::uint64_t> times,
                                        Arithmetic arith = Arithmetic::automatic);

// E[ N_n(0)^k ] with N_n(0) = #{1 <= m <= n : Z_m = 0}.
ExactResult exact_counting_moment(const lattice::StepLaw& step, const scenery::SceneryLaw& scen,
                                  std::uint64_t n, int k, Arithmetic arith = Arithmetic::automatic);

// E[ prod_y phi_xi( sum_j theta_j N^{(j)}(y) ) ] over all walk paths.
std::complex<double> exact_char_function(const lattice::StepLaw& step,
                                         const scenery::SceneryLaw& scen,
                                         std::span<const std::uint64_t> times,
                                         std::span<const double> theta);

}  // namespace rwrs::oracle
