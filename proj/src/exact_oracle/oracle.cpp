// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include "exact_oracle/oracle.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <map>
#include <vector>

#include "simkit/error.hpp"
#include "simkit/replicate.hpp"
#include "simkit/summation.hpp"

namespace rwrs::oracle {

using boost::multiprecision::cpp_rational;
using lattice::Pmf;
using lattice::StepLaw;
using scenery::SceneryLaw;

namespace {

// Double-double value hi + lo.
struct DD {
  double hi = 0.0;
  double lo = 0.0;
  DD() = default;
  DD(double h) : hi(h) {}  // NOLINT: implicit from double by design
  DD(double h, double l) : hi(h), lo(l) {}
};

inline DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}
inline DD quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}
inline DD operator+(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  DD t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}
inline DD& operator+=(DD& a, DD b) { return a = a + b; }
inline DD operator*(DD a, DD b) {
  const double p = a.hi * b.hi;
  const double e = std::fma(a.hi, b.hi, -p);
  return quick_two_sum(p, e + (a.hi * b.lo + a.lo * b.hi));
}
inline bool is_zero(const DD& a) { return a.hi == 0.0 && a.lo == 0.0; }
inline bool is_zero(const cpp_rational& a) { return a == 0; }
inline double to_double(const DD& a) { return a.hi + a.lo; }
inline double to_double(const cpp_rational& a) { return static_cast<double>(a); }

template <class Num>
std::vector<Num> weights_of(const Pmf& pmf);

template <>
std::vector<DD> weights_of<DD>(const Pmf& pmf) {
  std::vector<DD> w;
  if (pmf.rational_probs()) {
    for (const auto& r : *pmf.rational_probs()) {
      const double num = static_cast<double>(r.num), den = static_cast<double>(r.den);
      const double hi = num / den;
      w.push_back({hi, std::fma(-hi, den, num) / den});
    }
  } else {
    for (double p : pmf.probs()) w.push_back(p);
  }
  return w;
}

template <>
std::vector<cpp_rational> weights_of<cpp_rational>(const Pmf& pmf) {
  std::vector<cpp_rational> w;
  for (const auto& r : *pmf.rational_probs()) w.emplace_back(r.num, r.den);
  return w;
}

bool use_rational(const StepLaw& step, const SceneryLaw& scen, Arithmetic a) {
  const bool both = step.pmf().rational_probs() && scen.pmf().rational_probs();
  if (a == Arithmetic::rational) {
    require(both, "rational arithmetic requires rational step and scenery laws");
    return true;
  }
  return a == Arithmetic::automatic && both;
}

std::uint64_t check_budget(const StepLaw& step, std::uint64_t n) {
  const double count = std::pow(static_cast<double>(step.pmf().size()), static_cast<double>(n));
  if (count > kPathBudget) fail(ErrorCode::resource_limit, "enumeration budget exceeded");
  return static_cast<std::uint64_t>(std::llround(count));
}

void check_times(std::span<const std::uint64_t> times) {
  require(!times.empty(), "times must be nonempty");
  require(times.front() > 0, "times must be positive");
  for (std::size_t i = 1; i < times.size(); ++i)
    require(times[i - 1] < times[i], "times must be increasing");
}

// Path enumeration split into prefix tasks; visit(positions, weight) is
// called once per distinct path of n-1 steps (positions S_0..S_{n-1}).  The
// n-th step never affects the statistics, so its weights sum out to one.
template <class Num, class Leaf>
void enumerate_paths(const StepLaw& step, std::uint64_t n, Leaf&& make_leaf,
                     std::vector<Num>& partials) {
  const auto w = weights_of<Num>(step.pmf());
  const auto& sup = step.pmf().support();
  const std::size_t b = sup.size();
  const std::uint64_t steps = n - 1;
  std::uint64_t depth = 0, prefixes = 1;
  while (depth < steps && prefixes * b <= 1024) {
    prefixes *= b;
    ++depth;
  }
  partials.assign(prefixes, Num(0));
  simkit::parallel_for(prefixes, [&](std::uint64_t pre) {
    auto leaf = make_leaf();
    std::vector<std::int64_t> pos(n, 0);
    Num weight(1);
    std::uint64_t code = pre;
    for (std::uint64_t t = 0; t < depth; ++t) {
      const std::size_t s = code % b;
      code /= b;
      pos[t + 1] = pos[t] + sup[s];
      weight = weight * w[s];
    }
    Num acc(0);
    // Iterative DFS over remaining steps.
    std::vector<std::size_t> choice(steps + 1, 0);
    std::vector<Num> wstack(steps + 2, Num(1));
    wstack[depth] = weight;
    std::uint64_t t = depth;
    if (t == steps) {
      acc += weight * leaf(pos);
    } else {
      for (;;) {
        if (choice[t] == b) {
          choice[t] = 0;
          if (t == depth) break;
          --t;
          ++choice[t];
          continue;
        }
        const std::size_t s = choice[t];
        pos[t + 1] = pos[t] + sup[s];
        wstack[t + 1] = wstack[t] * w[s];
        if (t + 1 == steps) {
          acc += wstack[t + 1] * leaf(pos);
          ++choice[t];
        } else {
          ++t;
        }
      }
    }
    partials[pre] = acc;
  });
}

template <class Num>
Num ordered_sum(const std::vector<Num>& parts) {
  Num s(0);
  for (const auto& p : parts) s += p;
  return s;
}

// P(sum_y xi_y c(y) = 0 in Z^k) for a multiset of count vectors.
template <class Num>
class JointConditional {
 public:
  JointConditional(const SceneryLaw& scen, std::size_t k)
      : k_(k), sup_(scen.pmf().support()), w_(weights_of<Num>(scen.pmf())) {}

  Num operator()(std::vector<std::uint32_t> flat) {
    // Canonical key: sort the per-site vectors.
    const std::size_t sites = flat.size() / k_;
    std::vector<std::vector<std::uint32_t>> rows(sites);
    for (std::size_t i = 0; i < sites; ++i)
      rows[i].assign(flat.begin() + static_cast<std::ptrdiff_t>(i * k_),
                     flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * k_));
    std::sort(rows.begin(), rows.end());
    auto it = cache_.find(rows);
    if (it != cache_.end()) return it->second;
    std::map<std::vector<std::int64_t>, Num> state, next;
    state[std::vector<std::int64_t>(k_, 0)] = Num(1);
    for (const auto& r : rows) {
      next.clear();
      for (const auto& [z, m] : state)
        for (std::size_t s = 0; s < sup_.size(); ++s) {
          auto t = z;
          for (std::size_t i = 0; i < k_; ++i) t[i] += sup_[s] * static_cast<std::int64_t>(r[i]);
          next[t] += m * w_[s];
        }
      state.swap(next);
    }
    auto z = state.find(std::vector<std::int64_t>(k_, 0));
    const Num v = z == state.end() ? Num(0) : z->second;
    cache_.emplace(std::move(rows), v);
    return v;
  }

 private:
  std::size_t k_;
  std::vector<std::int64_t> sup_;
  std::vector<Num> w_;
  std::map<std::vector<std::vector<std::uint32_t>>, Num> cache_;
};

// Per-site count vectors of the segments [n_{i-1}, n_i) of a path.
std::vector<std::uint32_t> site_vectors(const std::vector<std::int64_t>& pos,
                                        std::span<const std::uint64_t> times) {
  const std::size_t k = times.size();
  std::map<std::int64_t, std::vector<std::uint32_t>> by_site;
  std::size_t seg = 0;
  for (std::uint64_t t = 0; t < times.back(); ++t) {
    while (t >= times[seg]) ++seg;
    auto& v = by_site[pos[t]];
    if (v.empty()) v.assign(k, 0);
    ++v[seg];
  }
  std::vector<std::uint32_t> flat;
  flat.reserve(by_site.size() * k);
  for (const auto& [y, v] : by_site) flat.insert(flat.end(), v.begin(), v.end());
  return flat;
}

template <class Num>
ExactResult finish(const Num& v, std::uint64_t paths);

template <>
ExactResult finish<DD>(const DD& v, std::uint64_t paths) {
  return {to_double(v), paths, "double-double", ""};
}

template <>
ExactResult finish<cpp_rational>(const cpp_rational& v, std::uint64_t paths) {
  return {to_double(v), paths, "rational", v.str()};
}

template <class Num>
ExactResult joint_return_impl(const StepLaw& step, const SceneryLaw& scen,
                              std::span<const std::uint64_t> times, std::uint64_t paths) {
  std::vector<Num> parts;
  enumerate_paths<Num>(
      step, times.back(),
      [&] {
        return [cond = JointConditional<Num>(scen, times.size()),
                times](const std::vector<std::int64_t>& pos) mutable {
          return cond(site_vectors(pos, times));
        };
      },
      parts);
  return finish<Num>(ordered_sum(parts), paths);
}

// Lazy (path, scenery) DFS.  on_time(m, Z_m) is called for m = 1..n and may
// return false to prune; leaf(weight) at m = n.
template <class Num, class OnTime, class Leaf>
void enumerate_pairs(const StepLaw& step, const SceneryLaw& scen, std::uint64_t n,
                     OnTime&& on_time, Leaf&& leaf) {
  const auto ws = weights_of<Num>(step.pmf());
  const auto wx = weights_of<Num>(scen.pmf());
  const auto& ssup = step.pmf().support();
  const auto& xsup = scen.pmf().support();
  const auto reach = static_cast<std::int64_t>(n) * step.pmf().max_abs();
  std::vector<int> assigned(static_cast<std::size_t>(2 * reach + 1), -1);

  // Recursion depth is at most n (tiny by budget).
  auto rec = [&](auto&& self, std::uint64_t t, std::int64_t site, std::int64_t z,
                 const Num& weight) -> void {
    auto& slot = assigned[static_cast<std::size_t>(site + reach)];
    auto advance = [&](std::int64_t xi, const Num& w) {
      const std::int64_t z2 = z + xi;
      if (!on_time(t + 1, z2)) return;
      if (t + 1 == n) {
        leaf(w);
        return;
      }
      for (std::size_t s = 0; s < ssup.size(); ++s) self(self, t + 1, site + ssup[s], z2, w * ws[s]);
    };
    if (slot >= 0) {
      advance(xsup[static_cast<std::size_t>(slot)], weight);
    } else {
      for (std::size_t v = 0; v < xsup.size(); ++v) {
        slot = static_cast<int>(v);
        advance(xsup[v], weight * wx[v]);
      }
      assigned[static_cast<std::size_t>(site + reach)] = -1;
    }
  };
  rec(rec, 0, 0, 0, Num(1));
}

template <class Num>
ExactResult pairs_impl(const StepLaw& step, const SceneryLaw& scen,
                       std::span<const std::uint64_t> times, std::uint64_t paths) {
  Num total(0);
  std::vector<char> is_time(times.back() + 1, 0);
  for (auto t : times) is_time[t] = 1;
  enumerate_pairs<Num>(
      step, scen, times.back(), [&](std::uint64_t m, std::int64_t z) { return !is_time[m] || z == 0; },
      [&](const Num& w) { total += w; });
  return finish<Num>(total, paths);
}

template <class Num>
ExactResult moment_impl(const StepLaw& step, const SceneryLaw& scen, std::uint64_t n, int k,
                        std::uint64_t paths) {
  Num total(0);
  // zeros_at[m] is the running zero count of the current DFS branch.
  std::vector<std::uint64_t> zeros_at(n + 1, 0);
  enumerate_pairs<Num>(
      step, scen, n,
      [&](std::uint64_t m, std::int64_t z) {
        zeros_at[m] = zeros_at[m - 1] + (z == 0 ? 1 : 0);
        return true;
      },
      [&](const Num& w) {
        Num p(1);
        for (int i = 0; i < k; ++i) p = p * Num(static_cast<double>(zeros_at[n]));
        total += w * p;
      });
  return finish<Num>(total, paths);
}

}  // namespace

ExactResult exact_joint_return(const StepLaw& step, const SceneryLaw& scen,
                               std::span<const std::uint64_t> times, Arithmetic arith) {
  check_times(times);
  const auto paths = check_budget(step, times.back());
  if (use_rational(step, scen, arith)) return joint_return_impl<cpp_rational>(step, scen, times, paths);
  return joint_return_impl<DD>(step, scen, times, paths);
}

ExactResult exact_joint_return_by_pairs(const StepLaw& step, const SceneryLaw& scen,
                                        std::span<const std::uint64_t> times, Arithmetic arith) {
  check_times(times);
  const auto paths = check_budget(step, times.back());
  if (use_rational(step, scen, arith)) return pairs_impl<cpp_rational>(step, scen, times, paths);
  return pairs_impl<DD>(step, scen, times, paths);
}

ExactResult exact_counting_moment(const StepLaw& step, const SceneryLaw& scen, std::uint64_t n,
                                  int k, Arithmetic arith) {
  require(n >= 1, "n must be positive");
  require(k >= 1, "moment order must be positive");
  const auto paths = check_budget(step, n);
  if (use_rational(step, scen, arith)) return moment_impl<cpp_rational>(step, scen, n, k, paths);
  return moment_impl<DD>(step, scen, n, k, paths);
}

std::complex<double> exact_char_function(const StepLaw& step, const SceneryLaw& scen,
                                         std::span<const std::uint64_t> times,
                                         std::span<const double> theta) {
  check_times(times);
  require(theta.size() == times.size(), "theta must have one entry per time");
  check_budget(step, times.back());
  const std::size_t k = times.size();
  std::vector<DD> re_parts, im_parts;
  // Real and imaginary parts are enumerated in two passes to keep the
  // accumulator scalar.
  for (int pass = 0; pass < 2; ++pass) {
    enumerate_paths<DD>(
        step, times.back(),
        [&] {
          return [&, pass](const std::vector<std::int64_t>& pos) {
            const auto flat = site_vectors(pos, times);
            std::complex<double> acc{1.0, 0.0};
            for (std::size_t i = 0; i < flat.size(); i += k) {
              double u = 0.0;
              for (std::size_t j = 0; j < k; ++j) u += theta[j] * flat[i + j];
              acc *= scen.phi(u);
            }
            return DD(pass == 0 ? acc.real() : acc.imag());
          };
        },
        pass == 0 ? re_parts : im_parts);
  }
  return {to_double(ordered_sum(re_parts)), to_double(ordered_sum(im_parts))};
}

}  // namespace rwrs::oracle
