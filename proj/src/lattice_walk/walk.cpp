// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include "lattice_walk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "simkit/error.hpp"

namespace rwrs::lattice {

StepLaw::StepLaw(Pmf pmf) : pmf_(std::move(pmf)) {
  require(pmf_.size() >= 2, "step law must not be degenerate");
  require(gcd_all(pmf_.support()) == 1, "step law support must generate Z");
}

StepLaw StepLaw::simple() { return StepLaw(Pmf({-1, 1}, std::vector<Ratio>{{1, 2}, {1, 2}})); }

LocalTimeProfile::LocalTimeProfile(std::int64_t start, std::int64_t min_site,
                                   std::vector<std::uint32_t> counts)
    : start_(start), min_site_(min_site), counts_(std::move(counts)) {
  std::size_t first = 0;
  while (first < counts_.size() && counts_[first] == 0) ++first;
  std::size_t last = counts_.size();
  while (last > first && counts_[last - 1] == 0) --last;
  if (first > 0 || last < counts_.size()) {
    counts_ = std::vector<std::uint32_t>(counts_.begin() + static_cast<std::ptrdiff_t>(first),
                                         counts_.begin() + static_cast<std::ptrdiff_t>(last));
  }
  min_site_ += static_cast<std::int64_t>(first);
  for (auto c : counts_) length_ += c;
}

LocalTimeProfile LocalTimeProfile::from_map(std::int64_t start,
                                            const std::map<std::int64_t, std::uint64_t>& m) {
  if (m.empty()) return LocalTimeProfile(start, start, {});
  const auto lo = m.begin()->first;
  const auto hi = m.rbegin()->first;
  std::vector<std::uint32_t> dense(static_cast<std::size_t>(hi - lo + 1), 0);
  for (const auto& [y, c] : m) {
    require(c <= std::numeric_limits<std::uint32_t>::max(), "visit count too large");
    dense[static_cast<std::size_t>(y - lo)] = static_cast<std::uint32_t>(c);
  }
  return LocalTimeProfile(start, lo, std::move(dense));
}

std::uint64_t LocalTimeProfile::at(std::int64_t site) const noexcept {
  if (counts_.empty() || site < min_site_ || site > max_site()) return 0;
  return counts_[static_cast<std::size_t>(site - min_site_)];
}

std::map<std::int64_t, std::uint64_t> LocalTimeProfile::to_map() const {
  std::map<std::int64_t, std::uint64_t> m;
  for (std::size_t i = 0; i < counts_.size(); ++i)
    if (counts_[i]) m[min_site_ + static_cast<std::int64_t>(i)] = counts_[i];
  return m;
}

DenseCounter::DenseCounter(std::int64_t reserve_radius)
    : lo_(-reserve_radius), counts_(static_cast<std::size_t>(2 * reserve_radius + 1), 0) {}

void DenseCounter::grow(std::int64_t site) {
  const auto size = static_cast<std::int64_t>(counts_.size());
  std::int64_t new_lo = lo_, new_hi = lo_ + size;  // half-open
  while (site < new_lo) new_lo -= std::max<std::int64_t>(size, 64);
  while (site >= new_hi) new_hi += std::max<std::int64_t>(size, 64);
  std::vector<std::uint32_t> next(static_cast<std::size_t>(new_hi - new_lo), 0);
  std::copy(counts_.begin(), counts_.end(), next.begin() + (lo_ - new_lo));
  counts_.swap(next);
  lo_ = new_lo;
}

LocalTimeProfile DenseCounter::freeze(std::int64_t start) const {
  return LocalTimeProfile(start, lo_, counts_);
}

void DenseCounter::clear() noexcept { std::fill(counts_.begin(), counts_.end(), 0u); }

namespace {

void check_breakpoints(std::span<const std::uint64_t> b) {
  require(!b.empty(), "breakpoints must be nonempty");
  require(b.front() > 0, "breakpoints must be positive");
  for (std::size_t i = 1; i < b.size(); ++i)
    require(b[i - 1] < b[i], "breakpoints must be increasing");
  require(b.back() < std::numeric_limits<std::uint32_t>::max(), "walk too long");
}

template <class NextStep>
std::vector<LocalTimeProfile> run_segments(std::span<const std::uint64_t> b,
                                           std::int64_t origin, NextStep&& next) {
  check_breakpoints(b);
  std::vector<LocalTimeProfile> out;
  out.reserve(b.size());
  std::int64_t pos = origin;
  std::uint64_t t = 0;
  for (const auto end : b) {
    const std::uint64_t len = end - t;
    const auto radius = static_cast<std::int64_t>(
        std::min<double>(4.0 * std::sqrt(static_cast<double>(len)) + 16.0, len + 1.0));
    DenseCounter counter(radius);
    const std::int64_t start = pos;
    // Visits are relative to the segment start to keep the window centred.
    for (; t < end; ++t) {
      counter.visit(pos - start);
      if (t + 1 < b.back()) pos += next();
    }
    out.emplace_back(start, counter.lo() + start, counter.raw());
  }
  return out;
}

}  // namespace

std::vector<LocalTimeProfile> simulate_local_times(const StepLaw& law,
                                                   std::span<const std::uint64_t> breakpoints,
                                                   simkit::RngStream& rng) {
  const Pmf& pmf = law.pmf();
  if (pmf.is_rademacher())
    return run_segments(breakpoints, 0, [&] { return rng.bit() ? std::int64_t{1} : std::int64_t{-1}; });
  return run_segments(breakpoints, 0, [&] { return pmf.sample(rng); });
}

std::vector<LocalTimeProfile> profiles_from_steps(std::span<const std::int64_t> steps,
                                                  std::span<const std::uint64_t> breakpoints,
                                                  std::int64_t origin) {
  check_breakpoints(breakpoints);
  require(steps.size() + 1 >= breakpoints.back(), "not enough steps for breakpoints");
  std::size_t i = 0;
  return run_segments(breakpoints, origin, [&] { return steps[i++]; });
}

std::vector<std::int64_t> simulate_path(const StepLaw& law, std::uint64_t n,
                                        simkit::RngStream& rng) {
  std::vector<std::int64_t> path(n + 1);
  path[0] = 0;
  for (std::uint64_t k = 0; k < n; ++k) path[k + 1] = path[k] + law.step(rng);
  return path;
}

LocalTimeProfile merge(const LocalTimeProfile& p, const LocalTimeProfile& q) {
  if (p.empty()) return LocalTimeProfile(p.start(), q.min_site(),
                                         std::vector<std::uint32_t>(q.dense().begin(), q.dense().end()));
  if (q.empty()) return p;
  const auto lo = std::min(p.min_site(), q.min_site());
  const auto hi = std::max(p.max_site(), q.max_site());
  std::vector<std::uint32_t> dense(static_cast<std::size_t>(hi - lo + 1), 0);
  for (std::size_t i = 0; i < p.dense().size(); ++i)
    dense[static_cast<std::size_t>(p.min_site() - lo) + i] += p.dense()[i];
  for (std::size_t i = 0; i < q.dense().size(); ++i)
    dense[static_cast<std::size_t>(q.min_site() - lo) + i] += q.dense()[i];
  return LocalTimeProfile(p.start(), lo, std::move(dense));
}

std::uint64_t mutual_inner(const LocalTimeProfile& p, const LocalTimeProfile& q) noexcept {
  if (p.empty() || q.empty()) return 0;
  const auto lo = std::max(p.min_site(), q.min_site());
  const auto hi = std::min(p.max_site(), q.max_site());
  std::uint64_t s = 0;
  for (auto y = lo; y <= hi; ++y)
    s += static_cast<std::uint64_t>(p.dense()[static_cast<std::size_t>(y - p.min_site())]) *
         q.dense()[static_cast<std::size_t>(y - q.min_site())];
  return s;
}

ProfileStats profile_stats(const LocalTimeProfile& p, int window) {
  ProfileStats st;
  const auto c = p.dense();
  for (auto v : c) {
    if (v) ++st.range;
    st.sup = std::max<std::uint64_t>(st.sup, v);
  }
  double inv_sqrt[kHolderWindow + 1];
  window = std::clamp(window, 1, kHolderWindow);
  for (int g = 1; g <= window; ++g) inv_sqrt[g] = 1.0 / std::sqrt(static_cast<double>(g));
  double best = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::size_t stop = std::min(c.size(), i + static_cast<std::size_t>(window) + 1);
    for (std::size_t j = i + 1; j < stop; ++j) {
      const auto diff = c[i] > c[j] ? c[i] - c[j] : c[j] - c[i];
      best = std::max(best, diff * inv_sqrt[j - i]);
    }
  }
  st.holder_half = best;
  return st;
}

}  // namespace rwrs::lattice
