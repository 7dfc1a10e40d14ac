// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "lattice_walk/pmf.hpp"
#include "simkit/rng.hpp"

namespace rwrs::lattice {

// Centered step law whose support generates Z.
class StepLaw {
 public:
  explicit StepLaw(Pmf pmf);
  static StepLaw simple();  // {-1: 1/2, +1: 1/2}

  const Pmf& pmf() const noexcept { return pmf_; }
  std::int64_t step(simkit::RngStream& rng) const noexcept { return pmf_.sample(rng); }

 private:
  Pmf pmf_;
};

//---------------------------------------------------------------------------//
/*!
 * Visit counts of one walk segment.
 *
 * Stored densely over [min_site, max_site]; intermediate unvisited sites hold
 * zero.  Immutable after construction.
 */
class LocalTimeProfile {
 public:
  LocalTimeProfile() = default;
  // counts[i] is the visit count of site min_site + i.  Leading and trailing
  // zeros are trimmed.  length must equal the total count.
  LocalTimeProfile(std::int64_t start, std::int64_t min_site,
                   std::vector<std::uint32_t> counts);
  static LocalTimeProfile from_map(std::int64_t start,
                                   const std::map<std::int64_t, std::uint64_t>& counts);

  std::int64_t start() const noexcept { return start_; }
  std::int64_t min_site() const noexcept { return min_site_; }
  std::int64_t max_site() const noexcept {
    return min_site_ + static_cast<std::int64_t>(counts_.size()) - 1;
  }
  std::uint64_t length() const noexcept { return length_; }
  bool empty() const noexcept { return counts_.empty(); }
  std::span<const std::uint32_t> dense() const noexcept { return counts_; }
  std::uint64_t at(std::int64_t site) const noexcept;
  std::map<std::int64_t, std::uint64_t> to_map() const;

 private:
  std::int64_t start_ = 0;
  std::int64_t min_site_ = 0;
  std::vector<std::uint32_t> counts_;
  std::uint64_t length_ = 0;
};

struct ProfileStats {
  std::uint64_t range = 0;     // number of distinct visited sites
  std::uint64_t sup = 0;       // max visit count
  double holder_half = 0.0;    // max |N(y)-N(z)| / |y-z|^(1/2), |y-z| <= window
};

inline constexpr int kHolderWindow = 32;

// breakpoints are cumulative times b_1 < b_2 < ...; segment i covers times
// [b_{i-1}, b_i) (b_0 = 0) and starts at S_{b_{i-1}}.  The walk starts at 0.
std::vector<LocalTimeProfile> simulate_local_times(const StepLaw& law,
                                                   std::span<const std::uint64_t> breakpoints,
                                                   simkit::RngStream& rng);

// Same, from realized steps (steps.size() >= breakpoints.back() - 1).
std::vector<LocalTimeProfile> profiles_from_steps(std::span<const std::int64_t> steps,
                                                  std::span<const std::uint64_t> breakpoints,
                                                  std::int64_t origin = 0);

// Positions S_0..S_n with S_0 = 0.
std::vector<std::int64_t> simulate_path(const StepLaw& law, std::uint64_t n,
                                        simkit::RngStream& rng);

LocalTimeProfile merge(const LocalTimeProfile& p, const LocalTimeProfile& q);
std::uint64_t mutual_inner(const LocalTimeProfile& p, const LocalTimeProfile& q) noexcept;
ProfileStats profile_stats(const LocalTimeProfile& p, int window = kHolderWindow);

//---------------------------------------------------------------------------//
/*!
 * Growable dense visit counter centred on the origin.  Used by simulators that
 * need running local times without materializing the path.
 */
class DenseCounter {
 public:
  explicit DenseCounter(std::int64_t reserve_radius = 64);

  // Increments the count at site and returns the new count.
  std::uint32_t visit(std::int64_t site) {
    if (site < lo_ || site >= lo_ + static_cast<std::int64_t>(counts_.size())) grow(site);
    return ++counts_[static_cast<std::size_t>(site - lo_)];
  }
  std::uint32_t at(std::int64_t site) const noexcept {
    if (site < lo_ || site >= lo_ + static_cast<std::int64_t>(counts_.size())) return 0;
    return counts_[static_cast<std::size_t>(site - lo_)];
  }
  std::int64_t lo() const noexcept { return lo_; }
  const std::vector<std::uint32_t>& raw() const noexcept { return counts_; }
  LocalTimeProfile freeze(std::int64_t start) const;
  void clear() noexcept;

 private:
  void grow(std::int64_t site);
  std::int64_t lo_;
  std::vector<std::uint32_t> counts_;
};

}  // namespace rwrs::lattice
