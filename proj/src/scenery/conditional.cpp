// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include "scenery/conditional.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "simkit/error.hpp"
#include "simkit/summation.hpp"

namespace rwrs::scenery {

using lattice::LocalTimeProfile;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNegligible = 1e-18;
constexpr double kConvolutionDropTol = 1e-10;
constexpr double kRefineTol = 1e-9;
constexpr int kMaxRefinements = 8;

std::complex<double> ipow(std::complex<double> z, std::uint64_t e) noexcept {
  std::complex<double> r{1.0, 0.0};
  while (e) {
    if (e & 1u) r *= z;
    z *= z;
    e >>= 1;
  }
  return r;
}

double ipow(double x, std::uint64_t e) noexcept {
  double r = 1.0;
  while (e) {
    if (e & 1u) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

bool all_admissible(std::span<const LocalTimeProfile> profiles, const SceneryLaw& law) {
  for (const auto& p : profiles)
    if (p.length() % static_cast<std::uint64_t>(law.d0()) != 0) return false;
  return true;
}

void union_window(std::span<const LocalTimeProfile> profiles, std::int64_t& lo, std::int64_t& hi) {
  lo = std::numeric_limits<std::int64_t>::max();
  hi = std::numeric_limits<std::int64_t>::min();
  for (const auto& p : profiles) {
    if (p.empty()) continue;
    lo = std::min(lo, p.min_site());
    hi = std::max(hi, p.max_site());
  }
}

std::int64_t one_dim_nodes(const SceneryLaw& law, const CountHistogram& h,
                           std::int64_t max_abs_target, std::uint64_t min_nodes, double tol) {
  const auto& pmf = law.pmf();
  const double w = static_cast<double>(pmf.max_value() - pmf.min_value());
  const double hoeffding = w * std::sqrt(h.energy * std::log(2.0 / tol) / 2.0);
  const double span = static_cast<double>(pmf.max_abs()) * static_cast<double>(h.mass);
  const double need = static_cast<double>(max_abs_target) + std::min(hoeffding, span) + 1.0;
  auto m = static_cast<std::int64_t>(std::ceil(need / static_cast<double>(law.d())));
  m = std::max<std::int64_t>({m, static_cast<std::int64_t>(min_nodes), 64});
  if (m % 2) ++m;
  return m;
}

}  // namespace

ConditionalMethod ConditionalMethod::char_quadrature(std::uint64_t nodes) {
  require(nodes >= 64 && nodes % 2 == 0, "quadrature node count must be even and >= 64");
  return {Tag::char_quadrature, nodes};
}

std::vector<std::int64_t> sample_and_evaluate(std::span<const LocalTimeProfile> profiles,
                                              const SceneryLaw& law, simkit::RngStream& rng) {
  std::vector<std::int64_t> z(profiles.size(), 0);
  std::int64_t lo, hi;
  union_window(profiles, lo, hi);
  for (auto y = lo; y <= hi; ++y) {
    bool visited = false;
    for (const auto& p : profiles)
      if (p.at(y)) {
        visited = true;
        break;
      }
    if (!visited) continue;
    const auto xi = law.sample(rng);
    for (std::size_t i = 0; i < profiles.size(); ++i)
      z[i] += static_cast<std::int64_t>(profiles[i].at(y)) * xi;
  }
  return z;
}

//---------------------------------------------------------------------------//
void CountHistogram::add(std::uint32_t c, std::uint32_t h) {
  if (c == 0 || h == 0) return;
  entries.emplace_back(c, h);
  mass += static_cast<std::uint64_t>(c) * h;
  energy += static_cast<double>(c) * c * h;
}

void CountHistogram::finalize() {
  std::sort(entries.begin(), entries.end());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> merged;
  for (const auto& e : entries) {
    if (!merged.empty() && merged.back().first == e.first)
      merged.back().second += e.second;
    else
      merged.push_back(e);
  }
  // Largest variance contributions first so the running product decays fast.
  std::stable_sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) {
    return static_cast<double>(a.first) * a.first * a.second >
           static_cast<double>(b.first) * b.first * b.second;
  });
  entries.swap(merged);
}

CountHistogram histogram_of(const LocalTimeProfile& p) {
  std::map<std::uint32_t, std::uint32_t> m;
  for (auto c : p.dense())
    if (c) ++m[c];
  CountHistogram h;
  for (const auto& [c, n] : m) h.add(c, n);
  h.finalize();
  return h;
}

//---------------------------------------------------------------------------//
PointInversion::PointInversion(const SceneryLaw& law, const CountHistogram& hist,
                               std::int64_t max_abs_target, std::uint64_t min_nodes, double tol)
    : law_(&law), hist_(&hist), mass_(hist.mass) {
  m_ = static_cast<std::uint64_t>(one_dim_nodes(law, hist, max_abs_target, min_nodes, tol));
  evaluate(0, m_ / 2 + 1, 1);
}

PointInversion::PointInversion(const SceneryLaw& law, const CountHistogram& hist, std::uint64_t m)
    : law_(&law), hist_(&hist), m_(m), mass_(hist.mass) {}

PointInversion PointInversion::refined() const {
  PointInversion r(*law_, *hist_, 2 * m_);
  r.kept_.reserve(2 * kept_.size());
  for (const auto& n : kept_) r.kept_.push_back({2 * n.j, n.phi});
  r.evaluate(1, m_ + 1, 2);
  return r;
}

std::complex<double> PointInversion::phi_at(double theta) const noexcept {
  const SceneryLaw& law = *law_;
  if (law.symmetric()) {
    double acc = 1.0;
    for (const auto& [c, h] : hist_->entries) {
      acc *= ipow(law.phi(theta * c).real(), h);
      if (std::fabs(acc) < kNegligible) return {0.0, 0.0};
    }
    return {acc, 0.0};
  }
  std::complex<double> acc{1.0, 0.0};
  for (const auto& [c, h] : hist_->entries) {
    acc *= ipow(law.phi(theta * c), h);
    if (std::abs(acc) < kNegligible) return {0.0, 0.0};
  }
  return acc;
}

void PointInversion::evaluate(std::uint64_t j_begin, std::uint64_t j_end, std::uint64_t j_step) {
  const double base = kTwoPi / (static_cast<double>(law_->d()) * static_cast<double>(m_));
  for (std::uint64_t j = j_begin; j < j_end; j += j_step) {
    const auto f = phi_at(base * static_cast<double>(j));
    if (f.real() != 0.0 || f.imag() != 0.0) kept_.push_back({j, f});
  }
}

double PointInversion::prob(std::int64_t a) const noexcept {
  if (!law_->in_coset(a, mass_)) return 0.0;
  const auto period = static_cast<__int128>(law_->d()) * static_cast<__int128>(m_);
  const double scale = kTwoPi / static_cast<double>(period);
  __int128 ar = static_cast<__int128>(a) % period;
  if (ar < 0) ar += period;
  simkit::CompensatedSum s;
  for (const auto& n : kept_) {
    // Phase theta_j * a reduced exactly modulo 2 pi.
    const auto r = static_cast<double>((static_cast<__int128>(n.j) * ar) % period);
    const double ang = scale * r;
    const double re = n.phi.real() * std::cos(ang) + n.phi.imag() * std::sin(ang);
    const double w = (n.j == 0 || 2 * n.j == m_) ? 1.0 : 2.0;
    s.add(w * re);
  }
  const double p = s.value() / static_cast<double>(m_);
  return std::clamp(p, 0.0, 1.0);
}

//---------------------------------------------------------------------------//
namespace {

std::int64_t conv_window(const SceneryLaw& law, std::uint64_t n) {
  const double w12 = 12.0 * law.sigma() * std::pow(static_cast<double>(n), 0.75);
  const double span = static_cast<double>(law.pmf().max_abs()) * static_cast<double>(n);
  return static_cast<std::int64_t>(std::ceil(std::min(w12, span)));
}

double convolution_1(const LocalTimeProfile& prof, const SceneryLaw& law) {
  const auto& sup = law.pmf().support();
  const auto& pr = law.pmf().probs();
  const std::int64_t W = conv_window(law, prof.length());
  const std::size_t size = static_cast<std::size_t>(2 * W + 1);
  std::vector<double> cur(size, 0.0), nxt(size, 0.0);
  cur[static_cast<std::size_t>(W)] = 1.0;
  std::int64_t lo = 0, hi = 0;  // nonzero range, relative offsets
  double dropped = 0.0;
  for (auto c : prof.dense()) {
    if (!c) continue;
    std::fill(nxt.begin(), nxt.end(), 0.0);
    std::int64_t nlo = W, nhi = -W;
    for (auto z = lo; z <= hi; ++z) {
      const double m = cur[static_cast<std::size_t>(z + W)];
      if (m == 0.0) continue;
      for (std::size_t k = 0; k < sup.size(); ++k) {
        const std::int64_t t = z + sup[k] * static_cast<std::int64_t>(c);
        if (t < -W || t > W) {
          dropped += m * pr[k];
          continue;
        }
        nxt[static_cast<std::size_t>(t + W)] += m * pr[k];
        nlo = std::min(nlo, t);
        nhi = std::max(nhi, t);
      }
    }
    cur.swap(nxt);
    lo = nlo;
    hi = nhi;
  }
  if (dropped >= kConvolutionDropTol) fail(ErrorCode::numerical, "convolution window dropped too much mass");
  return std::clamp(cur[static_cast<std::size_t>(W)], 0.0, 1.0);
}

double convolution_2(const LocalTimeProfile& p1, const LocalTimeProfile& p2,
                     const SceneryLaw& law) {
  const auto& sup = law.pmf().support();
  const auto& pr = law.pmf().probs();
  const std::int64_t W1 = conv_window(law, p1.length());
  const std::int64_t W2 = conv_window(law, p2.length());
  const std::int64_t S1 = 2 * W1 + 1, S2 = 2 * W2 + 1;
  const std::size_t cells = static_cast<std::size_t>(S1 * S2);
  require(cells <= (std::size_t{1} << 27), "joint convolution too large");
  std::vector<double> cur(cells, 0.0), nxt(cells, 0.0);
  auto idx = [&](std::int64_t a, std::int64_t b) {
    return static_cast<std::size_t>((a + W1) * S2 + (b + W2));
  };
  cur[idx(0, 0)] = 1.0;
  std::int64_t lo1 = 0, hi1 = 0, lo2 = 0, hi2 = 0;
  double dropped = 0.0;
  std::int64_t lo, hi;
  const LocalTimeProfile both[2] = {p1, p2};
  union_window(both, lo, hi);
  for (auto y = lo; y <= hi; ++y) {
    const auto c1 = static_cast<std::int64_t>(p1.at(y));
    const auto c2 = static_cast<std::int64_t>(p2.at(y));
    if (!c1 && !c2) continue;
    std::fill(nxt.begin(), nxt.end(), 0.0);
    std::int64_t nlo1 = W1, nhi1 = -W1, nlo2 = W2, nhi2 = -W2;
    for (auto a = lo1; a <= hi1; ++a)
      for (auto b = lo2; b <= hi2; ++b) {
        const double m = cur[idx(a, b)];
        if (m == 0.0) continue;
        for (std::size_t k = 0; k < sup.size(); ++k) {
          const auto ta = a + sup[k] * c1, tb = b + sup[k] * c2;
          if (ta < -W1 || ta > W1 || tb < -W2 || tb > W2) {
            dropped += m * pr[k];
            continue;
          }
          nxt[idx(ta, tb)] += m * pr[k];
          nlo1 = std::min(nlo1, ta);
          nhi1 = std::max(nhi1, ta);
          nlo2 = std::min(nlo2, tb);
          nhi2 = std::max(nhi2, tb);
        }
      }
    cur.swap(nxt);
    lo1 = nlo1, hi1 = nhi1, lo2 = nlo2, hi2 = nhi2;
  }
  if (dropped >= kConvolutionDropTol) fail(ErrorCode::numerical, "convolution window dropped too much mass");
  return std::clamp(cur[idx(0, 0)], 0.0, 1.0);
}

// k-dimensional trapezoid rule with M nodes per axis.
double quadrature_k(const std::vector<std::pair<std::vector<std::uint32_t>, std::uint32_t>>& tuples,
                    const SceneryLaw& law, std::uint64_t m, std::size_t k) {
  const double base = kTwoPi / (static_cast<double>(law.d()) * static_cast<double>(m));
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (total > 100'000'000 / m) fail(ErrorCode::resource_limit, "quadrature grid too large");
    total *= m;
  }
  std::vector<std::uint64_t> j(k, 0);
  simkit::CompensatedSum s;
  for (std::uint64_t cell = 0; cell < total; ++cell) {
    std::complex<double> acc{1.0, 0.0};
    for (const auto& [c, h] : tuples) {
      double u = 0.0;
      for (std::size_t i = 0; i < k; ++i) u += static_cast<double>(j[i]) * c[i];
      acc *= ipow(law.phi(base * u), h);
      if (std::abs(acc) < kNegligible) {
        acc = 0.0;
        break;
      }
    }
    s.add(acc.real());
    for (std::size_t i = 0; i < k; ++i) {
      if (++j[i] < m) break;
      j[i] = 0;
    }
  }
  return std::clamp(s.value() / static_cast<double>(total), 0.0, 1.0);
}

}  // namespace

double conditional_return_prob(std::span<const LocalTimeProfile> profiles, const SceneryLaw& law,
                               const ConditionalMethod& method) {
  require(!profiles.empty(), "at least one profile required");
  if (method.tag == ConditionalMethod::Tag::char_quadrature)
    require(method.node_count >= 64 && method.node_count % 2 == 0,
            "quadrature node count must be even and >= 64");
  const std::size_t k = profiles.size();
  if (method.tag == ConditionalMethod::Tag::convolution && k > 2)
    fail(ErrorCode::unsupported_method, "convolution method supports k <= 2");
  if (!all_admissible(profiles, law)) return 0.0;

  if (method.tag == ConditionalMethod::Tag::convolution)
    return k == 1 ? convolution_1(profiles[0], law) : convolution_2(profiles[0], profiles[1], law);

  if (k == 1) {
    const auto h = histogram_of(profiles[0]);
    PointInversion inv(law, h, 0, method.node_count);
    double prev = inv.prob(0);
    for (int r = 0; r < kMaxRefinements; ++r) {
      inv = inv.refined();
      const double next = inv.prob(0);
      if (std::fabs(next - prev) <= kRefineTol) return next;
      prev = next;
    }
    fail(ErrorCode::numerical, "quadrature refinement did not converge");
  }

  // Joint tuples (N_1(y), ..., N_k(y)) with multiplicities.
  std::map<std::vector<std::uint32_t>, std::uint32_t> joint;
  std::int64_t lo, hi;
  union_window(profiles, lo, hi);
  for (auto y = lo; y <= hi; ++y) {
    std::vector<std::uint32_t> c(k);
    bool any = false;
    for (std::size_t i = 0; i < k; ++i) {
      c[i] = static_cast<std::uint32_t>(profiles[i].at(y));
      any = any || c[i];
    }
    if (any) ++joint[c];
  }
  std::vector<std::pair<std::vector<std::uint32_t>, std::uint32_t>> tuples(joint.begin(), joint.end());
  std::uint64_t m = method.node_count;
  for (const auto& p : profiles)
    m = std::max<std::uint64_t>(m, static_cast<std::uint64_t>(one_dim_nodes(law, histogram_of(p), 0, 64, 1e-13)));
  double prev = quadrature_k(tuples, law, m, k);
  for (int r = 0; r < kMaxRefinements; ++r) {
    m *= 2;
    const double next = quadrature_k(tuples, law, m, k);
    if (std::fabs(next - prev) <= kRefineTol) return next;
    prev = next;
  }
  fail(ErrorCode::numerical, "quadrature refinement did not converge");
}

//---------------------------------------------------------------------------//
double split_conditional_estimate(std::span<const LocalTimeProfile> profiles,
                                  const SceneryLaw& law, simkit::RngStream& rng, int inner_draws) {
  require(!profiles.empty(), "at least one profile required");
  require(inner_draws >= 1, "inner_draws must be positive");
  if (!all_admissible(profiles, law)) return 0.0;
  const std::size_t k = profiles.size();

  std::vector<std::map<std::uint32_t, std::uint32_t>> excl(k);
  std::vector<std::vector<std::uint32_t>> shared;  // per shared site: counts per segment
  std::int64_t lo, hi;
  union_window(profiles, lo, hi);
  std::vector<std::uint32_t> c(k);
  for (auto y = lo; y <= hi; ++y) {
    int owners = 0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < k; ++i) {
      c[i] = static_cast<std::uint32_t>(profiles[i].at(y));
      if (c[i]) {
        ++owners;
        last = i;
      }
    }
    if (owners == 1)
      ++excl[last][c[last]];
    else if (owners > 1)
      shared.push_back(c);
  }

  std::vector<CountHistogram> hist(k);
  std::vector<std::int64_t> reach(k, 0);
  for (const auto& s : shared)
    for (std::size_t i = 0; i < k; ++i) reach[i] += law.pmf().max_abs() * static_cast<std::int64_t>(s[i]);
  std::vector<PointInversion> inv;
  inv.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (const auto& [cc, n] : excl[i]) hist[i].add(cc, n);
    hist[i].finalize();
  }
  for (std::size_t i = 0; i < k; ++i) inv.emplace_back(law, hist[i], reach[i]);

  auto product = [&](const std::vector<std::int64_t>& C) {
    double prod = 1.0;
    for (std::size_t i = 0; i < k && prod > 0.0; ++i)
      prod *= hist[i].entries.empty() ? (C[i] == 0 ? 1.0 : 0.0) : inv[i].prob(-C[i]);
    return prod;
  };

  std::vector<std::int64_t> C(k, 0);
  if (shared.empty()) return product(C);
  double factor = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    double vs = 0.0, ve = 0.0;
    for (const auto& s : shared) vs += static_cast<double>(s[i]) * s[i];
    for (const auto& [cc, n] : excl[i]) ve += static_cast<double>(cc) * cc * n;
    factor = std::max(factor, ve > 0.0 ? std::ceil(std::sqrt(vs / ve)) : double(kMaxDrawFactor));
  }
  const int draws = inner_draws * static_cast<int>(std::min<double>(factor, kMaxDrawFactor));
  simkit::CompensatedSum acc;
  for (int r = 0; r < draws; ++r) {
    std::fill(C.begin(), C.end(), 0);
    for (const auto& s : shared) {
      const auto xi = law.sample(rng);
      for (std::size_t i = 0; i < k; ++i) C[i] += xi * static_cast<std::int64_t>(s[i]);
    }
    acc.add(product(C));
  }
  return acc.value() / draws;
}

double indicator_estimate(std::span<const LocalTimeProfile> profiles, const SceneryLaw& law,
                          simkit::RngStream& rng) {
  const auto z = sample_and_evaluate(profiles, law, rng);
  return std::all_of(z.begin(), z.end(), [](std::int64_t v) { return v == 0; }) ? 1.0 : 0.0;
}

}  // namespace rwrs::scenery
