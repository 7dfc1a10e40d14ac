// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>

#include "lattice_walk/pmf.hpp"

namespace rwrs::scenery {

struct LawConstants {
  double sigma2 = 0.0;
  std::int64_t d = 1;        // gcd of pairwise support differences
  std::int64_t d0 = 1;       // order of the support residue mod d
  std::int64_t residue = 0;  // support point reduced mod d, in [0, d)
};

// Errors: single-point pmf -> invalid-argument.  Non-centered pmfs are
// already rejected by Pmf.
LawConstants analyze_law(const lattice::Pmf& pmf);

class SceneryLaw {
 public:
  explicit SceneryLaw(lattice::Pmf pmf);
  static SceneryLaw rademacher();

  const lattice::Pmf& pmf() const noexcept { return pmf_; }
  const LawConstants& constants() const noexcept { return c_; }
  std::int64_t d() const noexcept { return c_.d; }
  std::int64_t d0() const noexcept { return c_.d0; }
  double sigma() const noexcept;

  // phi_xi(u) = E exp(i u xi).
  std::complex<double> phi(double u) const noexcept;
  // Real for symmetric laws; phi() has zero imaginary part then.
  bool symmetric() const noexcept { return symmetric_; }

  // True when a weighted sum of scenery values with total weight n can equal
  // target, i.e. target == residue * n (mod d).
  bool in_coset(std::int64_t target, std::uint64_t n) const noexcept;

  std::int64_t sample(simkit::RngStream& rng) const noexcept { return pmf_.sample(rng); }

 private:
  lattice::Pmf pmf_;
  LawConstants c_;
  bool symmetric_ = false;
};

}  // namespace rwrs::scenery
