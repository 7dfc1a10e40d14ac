// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include "harness/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "brownian/brownian.hpp"
#include "delta_process/delta.hpp"
#include "scenery/conditional.hpp"
#include "simkit/error.hpp"
#include "simkit/summation.hpp"

namespace rwrs::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t sub_base(std::uint64_t base, std::uint64_t index) {
  return base + simkit::stream_space(index + 1);
}

// Site values drawn on first visit.
class LazyScenery {
 public:
  explicit LazyScenery(const scenery::SceneryLaw& law, std::int64_t radius)
      : law_(&law), lo_(-radius), xi_(static_cast<std::size_t>(2 * radius + 1), kUnset) {}
  std::int64_t at(std::int64_t site, simkit::RngStream& rng) {
    if (site < lo_ || site >= lo_ + static_cast<std::int64_t>(xi_.size())) grow(site);
    auto& v = xi_[static_cast<std::size_t>(site - lo_)];
    if (v == kUnset) v = law_->sample(rng);
    return v;
  }

 private:
  static constexpr std::int64_t kUnset = std::numeric_limits<std::int64_t>::min();
  void grow(std::int64_t site) {
    const auto size = static_cast<std::int64_t>(xi_.size());
    std::int64_t nlo = lo_, nhi = lo_ + size;
    while (site < nlo) nlo -= std::max<std::int64_t>(size, 64);
    while (site >= nhi) nhi += std::max<std::int64_t>(size, 64);
    std::vector<std::int64_t> next(static_cast<std::size_t>(nhi - nlo), kUnset);
    std::copy(xi_.begin(), xi_.end(), next.begin() + (lo_ - nlo));
    xi_.swap(next);
    lo_ = nlo;
  }
  const scenery::SceneryLaw* law_;
  std::int64_t lo_;
  std::vector<std::int64_t> xi_;
};

std::vector<double> column_mean_cov(std::span<const std::vector<double>> cols,
                                    std::vector<double>& cov) {
  const std::size_t r = cols.size();
  const std::size_t n = cols[0].size();
  std::vector<double> mean(r);
  for (std::size_t i = 0; i < r; ++i) {
    simkit::CompensatedSum s;
    for (double v : cols[i]) s.add(v);
    mean[i] = s.value() / static_cast<double>(n);
  }
  cov.assign(r * r, 0.0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) {
      simkit::CompensatedSum s;
      for (std::size_t q = 0; q < n; ++q) s.add((cols[i][q] - mean[i]) * (cols[j][q] - mean[j]));
      cov[i * r + j] = cov[j * r + i] = s.value() / static_cast<double>(n - 1);
    }
  return mean;
}

std::optional<ScalingFit> maybe_fit(const std::vector<CurvePoint>& pts) {
  std::vector<PowerPoint> pp;
  double min_rel = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    if (!(p.estimate.value > 0.0)) return std::nullopt;
    pp.push_back({static_cast<double>(p.n), p.estimate.value, p.estimate.std_error});
    if (p.estimate.std_error > 0.0) min_rel = std::min(min_rel, p.estimate.std_error / p.estimate.value);
  }
  if (pp.size() < 3) return std::nullopt;
  // Points that are exact (zero spread) get the largest weight among the rest.
  if (std::isfinite(min_rel))
    for (auto& p : pp)
      if (p.std_error == 0.0) p.std_error = min_rel * p.value;
  return fit_power_law(pp);
}

}  // namespace

std::vector<std::uint64_t> admissible_times(std::uint64_t n, std::span<const double> T_ratios,
                                            std::int64_t d0) {
  require(!T_ratios.empty(), "T ratios must be nonempty");
  std::vector<std::uint64_t> t;
  double prev = 0.0;
  for (double r : T_ratios) {
    require(r > prev, "T ratios must be positive and increasing");
    prev = r;
    auto v = static_cast<std::uint64_t>(std::floor(static_cast<double>(n) * r * (1.0 + 1e-12)));
    if (T_ratios.size() > 1) v -= v % static_cast<std::uint64_t>(d0);
    require(v > 0 && (t.empty() || v > t.back()), "rounded return times must be increasing");
    t.push_back(v);
  }
  return t;
}

ReturnCurve estimate_return_curve(const lattice::StepLaw& step, const scenery::SceneryLaw& scen,
                                  std::span<const std::uint64_t> n_list,
                                  std::span<const double> T_ratios, std::uint64_t walk_replicas,
                                  std::uint64_t master_seed, std::uint64_t stream_base,
                                  Estimator estimator, bool allow_inadmissible) {
  require(!n_list.empty(), "n list must be nonempty");
  require(walk_replicas > 0, "replicas must be positive");
  const auto d0 = static_cast<std::uint64_t>(scen.d0());
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    require(n_list[i] > 0 && (i == 0 || n_list[i] > n_list[i - 1]), "n list must be increasing");
    if (!allow_inadmissible && n_list[i] % d0 != 0)
      fail(ErrorCode::invalid_argument,
           "n = " + std::to_string(n_list[i]) + " is not a multiple of d0 = " + std::to_string(d0) +
               "; the return probability is exactly 0");
  }
  ReturnCurve curve;
  for (std::size_t j = 0; j < n_list.size(); ++j) {
    CurvePoint pt;
    pt.n = n_list[j];
    pt.times = admissible_times(n_list[j], T_ratios, scen.d0());
    const auto& b = pt.times;
    auto values = simkit::replica_values(
        [&](simkit::RngStream& rng) {
          const auto prof = lattice::simulate_local_times(step, b, rng);
          return estimator == Estimator::conditional
                     ? scenery::split_conditional_estimate(prof, scen, rng)
                     : scenery::indicator_estimate(prof, scen, rng);
        },
        walk_replicas, master_seed, sub_base(stream_base, j));
    pt.estimate = simkit::summarize(values, master_seed);
    curve.points.push_back(std::move(pt));
  }
  curve.fit = maybe_fit(curve.points);
  return curve;
}

//---------------------------------------------------------------------------//
simkit::Estimate ratio_estimate(std::span<const std::vector<double>> columns,
                                std::uint64_t master_seed) {
  require(columns.size() >= 2, "ratio needs a numerator and a denominator");
  const auto n = columns[0].size();
  require(n >= 2, "ratio needs at least 2 replicas");
  std::vector<double> cov;
  const auto mean = column_mean_cov(columns, cov);
  const std::size_t r = columns.size();
  for (std::size_t i = 1; i < r; ++i) {
    const double se = std::sqrt(cov[i * r + i] / static_cast<double>(n));
    if (!(mean[i] > 3.0 * se) && !(mean[i] < -3.0 * se))
      fail(ErrorCode::degenerate, "ratio denominator is consistent with 0");
  }
  double ratio = mean[0];
  for (std::size_t i = 1; i < r; ++i) ratio /= mean[i];
  // Gradient of the log ratio.
  std::vector<double> g(r);
  g[0] = 1.0 / mean[0];
  for (std::size_t i = 1; i < r; ++i) g[i] = -1.0 / mean[i];
  double v = 0.0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) v += g[i] * g[j] * cov[i * r + j];
  simkit::Estimate e;
  e.value = ratio;
  e.std_error = std::fabs(ratio) * std::sqrt(std::max(v, 0.0) / static_cast<double>(n));
  e.replicas = n;
  e.master_seed = master_seed;
  return e;
}

simkit::Estimate correlation_rhs(double t_ratio, std::uint64_t replicas, std::uint64_t fineness,
                                 std::uint64_t master_seed, std::uint64_t stream_base,
                                 std::uint64_t* rejected) {
  require(t_ratio > 0.0, "t ratio must be positive");
  const double T[] = {1.0, 1.0 + t_ratio};
  auto cols = simkit::replica_vectors(
      [&](simkit::RngStream& rng, std::span<double> out) {
        const auto fs = brownian::sample_local_time_fields(T, fineness, rng);
        const auto g = brownian::gram_of_fields(fs.increments, brownian::GramNormalization::raw);
        if (brownian::near_singular(g)) {
          out[0] = out[1] = kNaN;
          return;
        }
        out[0] = 1.0 / std::sqrt(g.det);
        out[1] = 1.0 / std::sqrt(g.diag_product());
      },
      2, replicas, master_seed, stream_base);
  std::vector<std::vector<double>> ok(2);
  for (std::size_t i = 0; i < cols[0].size(); ++i)
    if (!std::isnan(cols[0][i])) {
      ok[0].push_back(cols[0][i]);
      ok[1].push_back(cols[1][i]);
    }
  if (rejected) *rejected = cols[0].size() - ok[0].size();
  if (static_cast<double>(cols[0].size() - ok[0].size()) >
      brownian::kMaxRejectionRate * static_cast<double>(cols[0].size()))
    fail(ErrorCode::numerical, "near-singular Gram rejection rate above 0.1%; increase fineness");
  return ratio_estimate(ok, master_seed);
}

CorrelationRatio correlation_ratio(std::uint64_t n, double t_ratio, std::uint64_t replicas,
                                   std::uint64_t master_seed, std::uint64_t fineness,
                                   std::uint64_t brownian_replicas, const lattice::StepLaw& step,
                                   const scenery::SceneryLaw& scen) {
  require(replicas > 0, "replicas must be positive");
  const auto d0 = static_cast<std::uint64_t>(scen.d0());
  const auto n2 = static_cast<std::uint64_t>(std::floor(static_cast<double>(n) * t_ratio * (1.0 + 1e-12)));
  require(n > 0 && n2 > 0 && n % d0 == 0 && n2 % d0 == 0,
          "n and [n t] must be positive multiples of d0");
  const std::uint64_t b[] = {n, n + n2};
  auto cols = simkit::replica_vectors(
      [&](simkit::RngStream& rng, std::span<double> out) {
        const auto prof = lattice::simulate_local_times(step, b, rng);
        out[0] = scenery::split_conditional_estimate(prof, scen, rng);
        out[1] = scenery::split_conditional_estimate(std::span(prof).first(1), scen, rng);
        out[2] = scenery::split_conditional_estimate(std::span(prof).subspan(1, 1), scen, rng);
      },
      3, replicas, master_seed, sub_base(0, 0));
  CorrelationRatio cr;
  cr.lhs = ratio_estimate(cols, master_seed);
  cr.rhs = correlation_rhs(t_ratio, brownian_replicas ? brownian_replicas : replicas, fineness,
                           master_seed, sub_base(0, 1), &cr.rejected);
  return cr;
}

//---------------------------------------------------------------------------//
std::vector<std::vector<double>> return_counts(const lattice::StepLaw& step,
                                               const scenery::SceneryLaw& scen,
                                               std::span<const std::uint64_t> record_times,
                                               std::uint64_t replicas, std::uint64_t master_seed,
                                               std::uint64_t stream_base) {
  require(!record_times.empty(), "record times must be nonempty");
  for (std::size_t i = 0; i < record_times.size(); ++i)
    require(record_times[i] > 0 && (i == 0 || record_times[i] > record_times[i - 1]),
            "record times must be positive and increasing");
  const auto horizon = record_times.back();
  const auto radius = static_cast<std::int64_t>(
      4.0 * std::sqrt(step.pmf().variance() * static_cast<double>(horizon))) + 16;
  return simkit::replica_vectors(
      [&](simkit::RngStream& rng, std::span<double> out) {
        LazyScenery xi(scen, radius);
        std::int64_t s = 0, z = 0;
        std::uint64_t count = 0;
        std::size_t next = 0;
        for (std::uint64_t m = 1; m <= horizon; ++m) {
          z += xi.at(s, rng);
          s += step.step(rng);
          count += z == 0;
          if (m == record_times[next]) out[next++] = static_cast<double>(count);
        }
      },
      record_times.size(), replicas, master_seed, stream_base);
}

CountingCurve counting_moment_curve(const lattice::StepLaw& step, const scenery::SceneryLaw& scen,
                                    int k, std::span<const std::uint64_t> n_list,
                                    std::uint64_t replicas, std::uint64_t master_seed,
                                    std::uint64_t stream_base) {
  require(k >= 1 && k <= 3, "k must be 1, 2 or 3");
  require(replicas >= 2, "at least 2 replicas required");
  const auto cols = return_counts(step, scen, n_list, replicas, master_seed, stream_base);
  CountingCurve c;
  c.k = k;
  c.law_factor = std::pow(static_cast<double>(scen.d()) /
                              (scen.sigma() * static_cast<double>(scen.d0())), k);
  std::vector<std::vector<double>> powk(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (double v : cols[j]) powk[j].push_back(std::pow(v, k));
    CurvePoint pt;
    pt.n = n_list[j];
    pt.times = {n_list[j]};
    pt.estimate = simkit::summarize(powk[j], master_seed);
    c.points.push_back(std::move(pt));
  }
  c.fit = maybe_fit(c.points);
  if (cols.size() >= 2) {
    const auto J = cols.size() - 1;
    const double q = 0.25 * k;
    const double den = std::pow(static_cast<double>(n_list[J]), q) -
                       std::pow(static_cast<double>(n_list[J - 1]), q);
    std::vector<double> inc(replicas);
    for (std::uint64_t i = 0; i < replicas; ++i) inc[i] = (powk[J][i] - powk[J - 1][i]) / den;
    c.constant = simkit::summarize(inc, master_seed);
  }
  return c;
}

ShadowReport tightness_shadow(const lattice::StepLaw& step, const scenery::SceneryLaw& scen,
                              std::uint64_t n, double t, std::span<const double> hs,
                              std::uint64_t replicas, double budget, std::uint64_t master_seed,
                              std::uint64_t stream_base) {
  require(t > 0.0 && !hs.empty(), "t and hs must be given");
  const auto at = [&](double s) {
    return static_cast<std::uint64_t>(std::floor(static_cast<double>(n) * s * (1.0 + 1e-12)));
  };
  std::vector<std::uint64_t> times{at(t)};
  for (double h : hs) {
    require(h > 0.0, "h must be positive");
    times.push_back(at(t + h));
  }
  std::vector<std::uint64_t> sorted = times;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  require(sorted.front() > 0 && sorted.size() == times.size(), "times [n(t+h)] must be distinct and positive");
  const auto cols = return_counts(step, scen, sorted, replicas, master_seed, stream_base);
  const auto col = [&](std::uint64_t tm) {
    return cols[static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), tm) - sorted.begin())];
  };
  ShadowReport r;
  r.budget = budget;
  const auto& base = col(times[0]);
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const auto& top = col(times[i + 1]);
    const double norm = std::sqrt(hs[i]) * std::sqrt(static_cast<double>(n));
    std::vector<double> v(replicas);
    for (std::uint64_t q = 0; q < replicas; ++q) v[q] = (top[q] - base[q]) * (top[q] - base[q]) / norm;
    ShadowCell cell{n, i, simkit::summarize(v, master_seed)};
    r.max_upper = std::max(r.max_upper, cell.value.value + 3.0 * cell.value.std_error);
    r.cells.push_back(cell);
  }
  r.pass = r.max_upper <= budget;
  return r;
}

ShadowReport uniformity_shadow(const lattice::StepLaw& step, const scenery::SceneryLaw& scen,
                               std::uint64_t n, int per_axis, std::uint64_t replicas,
                               double budget, std::uint64_t master_seed,
                               std::uint64_t stream_base, double theta) {
  require(per_axis >= 2, "at least 2 grid values per axis");
  require(theta > 0.0 && theta < 1.0, "theta in (0, 1)");
  const auto d0 = static_cast<std::uint64_t>(scen.d0());
  std::vector<std::uint64_t> axis;
  const double lo = theta * std::log(static_cast<double>(n)), hi = std::log(static_cast<double>(n));
  for (int i = 0; i < per_axis; ++i) {
    auto v = static_cast<std::uint64_t>(std::llround(std::exp(lo + (hi - lo) * i / (per_axis - 1))));
    v -= v % d0;
    if (v == 0) v = d0;
    if (axis.empty() || v > axis.back()) axis.push_back(v);
  }
  ShadowReport r;
  r.budget = budget;
  std::uint64_t cell_index = 0;
  for (auto n1 : axis)
    for (auto n2 : axis) {
      const std::uint64_t b[] = {n1, n1 + n2};
      auto v = simkit::replica_values(
          [&](simkit::RngStream& rng) {
            const auto prof = lattice::simulate_local_times(step, b, rng);
            return scenery::split_conditional_estimate(prof, scen, rng);
          },
          replicas, master_seed, sub_base(stream_base, cell_index++));
      const double scale = std::pow(static_cast<double>(n1) * static_cast<double>(n2), 0.75);
      for (auto& x : v) x *= scale;
      ShadowCell cell{n1, n2, simkit::summarize(v, master_seed)};
      r.max_upper = std::max(r.max_upper, cell.value.value + 3.0 * cell.value.std_error);
      r.cells.push_back(cell);
    }
  r.pass = r.max_upper <= budget;
  return r;
}

//---------------------------------------------------------------------------//
std::vector<std::vector<double>> walk_gram_samples(const lattice::StepLaw& step, std::uint64_t n,
                                                   std::span<const double> T_list,
                                                   std::uint64_t replicas,
                                                   std::uint64_t master_seed,
                                                   std::uint64_t stream_base) {
  const auto b = admissible_times(n, T_list, 1);
  const std::size_t k = b.size();
  const double norm = std::sqrt(step.pmf().variance()) * std::pow(static_cast<double>(n), -1.5);
  return simkit::replica_vectors(
      [&](simkit::RngStream& rng, std::span<double> out) {
        const auto seg = lattice::simulate_local_times(step, b, rng);
        std::vector<lattice::LocalTimeProfile> cum;
        for (std::size_t i = 0; i < k; ++i) cum.push_back(i ? lattice::merge(cum.back(), seg[i]) : seg[0]);
        std::size_t q = 0;
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = i; j < k; ++j)
            out[q++] = norm * static_cast<double>(lattice::mutual_inner(cum[i], cum[j]));
      },
      k * (k + 1) / 2, replicas, master_seed, stream_base);
}

std::vector<std::vector<double>> brownian_gram_samples(std::span<const double> T_list,
                                                       std::uint64_t replicas,
                                                       std::uint64_t fineness,
                                                       std::uint64_t master_seed,
                                                       std::uint64_t stream_base) {
  const std::size_t k = T_list.size();
  return simkit::replica_vectors(
      [&](simkit::RngStream& rng, std::span<double> out) {
        const auto fs = brownian::sample_local_time_fields(T_list, fineness, rng);
        const auto g = brownian::gram_of_fields(fs.cumulative, brownian::GramNormalization::raw);
        std::size_t q = 0;
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = i; j < k; ++j) out[q++] = g.at(i, j);
      },
      k * (k + 1) / 2, replicas, master_seed, stream_base);
}

std::vector<TestReport> gram_convergence_test(const lattice::StepLaw& step, std::uint64_t n,
                                              std::span<const double> T_list,
                                              std::uint64_t replicas, std::uint64_t fineness,
                                              std::uint64_t master_seed, double threshold) {
  const auto w = walk_gram_samples(step, n, T_list, replicas, master_seed, sub_base(0, 0));
  const auto g = brownian_gram_samples(T_list, replicas, fineness, master_seed, sub_base(0, 1));
  const double thr = threshold > 0.0 ? threshold : ks_threshold(replicas, replicas);
  std::vector<TestReport> out;
  const std::size_t k = T_list.size();
  std::size_t q = 0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j, ++q)
      out.push_back(make_report("gram(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
                                "KS", ks_two_sample(w[q], g[q]), replicas, replicas, thr));
  return out;
}

TestReport scaling_law_test(double T, std::uint64_t replicas, std::uint64_t master_seed,
                            double eps, std::uint64_t fineness, double dt, double threshold) {
  require(T > 0.0 && eps > 0.0, "T and eps must be positive");
  const auto lhs = simkit::replica_values(
      [&](simkit::RngStream& rng) {
        const auto p = delta::sample_delta_path(T, dt, fineness, rng);
        return delta::mollified_local_time(p, eps * std::pow(T, 1.5), T, 0.0);
      },
      replicas, master_seed, sub_base(0, 0));
  const auto rhs = simkit::replica_values(
      [&](simkit::RngStream& rng) {
        const auto p = delta::sample_delta_path(1.0, dt, fineness, rng);
        return std::pow(T, 0.25) * delta::mollified_local_time(p, eps, 1.0, 0.0);
      },
      replicas, master_seed, sub_base(0, 1));
  const double thr = threshold > 0.0 ? threshold : ks_threshold(replicas, replicas);
  return make_report("scaling_law(T=" + std::to_string(T) + ")", "KS", ks_two_sample(lhs, rhs),
                     replicas, replicas, thr);
}

}  // namespace rwrs::harness
