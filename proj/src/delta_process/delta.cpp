// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include "delta_process/delta.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "lattice_walk/walk.hpp"
#include "simkit/error.hpp"
#include "simkit/summation.hpp"

namespace rwrs::delta {

namespace {

std::uint64_t steps_for(double t, std::uint64_t m) {
  return static_cast<std::uint64_t>(std::floor(static_cast<double>(m) * t * (1.0 + 1e-12)));
}

// Lazily drawn standard normal per lattice site.
class GaussianScenery {
 public:
  explicit GaussianScenery(std::int64_t radius)
      : lo_(-radius), g_(static_cast<std::size_t>(2 * radius + 1), kUnset) {}
  double at(std::int64_t site, simkit::RngStream& rng) {
    if (site < lo_ || site >= lo_ + static_cast<std::int64_t>(g_.size())) grow(site);
    double& v = g_[static_cast<std::size_t>(site - lo_)];
    if (std::isnan(v)) v = rng.normal();
    return v;
  }

 private:
  static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
  void grow(std::int64_t site) {
    const auto size = static_cast<std::int64_t>(g_.size());
    std::int64_t nlo = lo_, nhi = lo_ + size;
    while (site < nlo) nlo -= std::max<std::int64_t>(size, 64);
    while (site >= nhi) nhi += std::max<std::int64_t>(size, 64);
    std::vector<double> next(static_cast<std::size_t>(nhi - nlo), kUnset);
    std::copy(g_.begin(), g_.end(), next.begin() + (lo_ - nlo));
    g_.swap(next);
    lo_ = nlo;
  }
  std::int64_t lo_;
  std::vector<double> g_;
};

std::vector<double> dirichlet(std::size_t k, double alpha, bool with_unit_slack,
                              simkit::RngStream& rng) {
  std::gamma_distribution<double> ga(alpha, 1.0);
  std::gamma_distribution<double> g1(1.0, 1.0);
  std::vector<double> u(k);
  double total = 0.0;
  for (;;) {
    total = 0.0;
    for (auto& x : u) total += (x = ga(rng));
    if (with_unit_slack) total += g1(rng);
    if (total > 0.0) break;
  }
  for (auto& x : u) x /= total;
  return u;
}

}  // namespace

DeltaPath sample_delta_path(double horizon, double dt, std::uint64_t m, simkit::RngStream& rng) {
  require(horizon > 0.0 && dt > 0.0, "horizon and dt must be positive");
  require(dt * static_cast<double>(m) >= 1.0 - 1e-12, "dt * m must be at least 1");
  const auto points = static_cast<std::size_t>(std::floor(horizon / dt * (1.0 + 1e-12))) + 1;
  DeltaPath p;
  p.dt = dt;
  p.horizon = horizon;
  p.fineness = m;
  p.values.assign(points, 0.0);
  const double scale = std::pow(static_cast<double>(m), -0.75);
  GaussianScenery g(static_cast<std::int64_t>(4.0 * std::sqrt(static_cast<double>(steps_for(horizon, m)))) + 16);
  std::int64_t pos = 0;
  std::uint64_t step = 0;
  simkit::CompensatedSum z;
  for (std::size_t j = 1; j < points; ++j) {
    const auto until = steps_for(static_cast<double>(j) * dt, m);
    for (; step < until; ++step) {
      z.add(g.at(pos, rng));
      pos += rng.bit() ? 1 : -1;
    }
    p.values[j] = scale * z.value();
  }
  return p;
}

double delta_given_field(const brownian::LocalTimeField& field, simkit::RngStream& rng) {
  const double sh = std::sqrt(field.h);
  simkit::CompensatedSum s;
  for (double v : field.values)
    if (v != 0.0) s.add(v * sh * rng.normal());
  return s.value();
}

std::vector<double> sample_delta_marginal(std::span<const double> T_list, std::uint64_t m,
                                          simkit::RngStream& rng) {
  const auto fs = brownian::sample_local_time_fields(T_list, m, rng);
  const auto g = brownian::gram_of_fields(fs.cumulative, brownian::GramNormalization::raw);
  const auto k = static_cast<Eigen::Index>(g.k);
  Eigen::MatrixXd a(k, k);
  double trace = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    trace += g.at(static_cast<std::size_t>(i), static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < k; ++j)
      a(i, j) = g.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) fail(ErrorCode::internal, "eigen decomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (ev[i] < -1e-12 * trace) fail(ErrorCode::internal, "covariance not positive semidefinite");
    if (ev[i] < 1e-14 * trace) ev[i] = 0.0;
  }
  Eigen::VectorXd z(k);
  for (Eigen::Index i = 0; i < k; ++i) z[i] = std::sqrt(ev[i]) * rng.normal();
  const Eigen::VectorXd x = es.eigenvectors() * z;
  return std::vector<double>(x.data(), x.data() + k);
}

double heat_kernel(double eps, double y) noexcept {
  return std::exp(-y * y / (2.0 * eps)) / std::sqrt(2.0 * std::numbers::pi * eps);
}

double mollified_local_time(const DeltaPath& path, double eps, double t, double x) {
  require(eps > 0.0, "eps must be positive");
  require(t >= 0.0 && t <= path.horizon * (1.0 + 1e-12), "t must lie within the path horizon");
  const auto n = std::min(path.values.size() - 1,
                          static_cast<std::size_t>(std::floor(t / path.dt * (1.0 + 1e-12))));
  simkit::CompensatedSum s;
  for (std::size_t j = 0; j < n; ++j) s.add(heat_kernel(eps, path.values[j] - x));
  return path.dt * s.value();
}

std::vector<double> mollified_local_time_curve(const DeltaPath& path, double eps, double x) {
  require(eps > 0.0, "eps must be positive");
  std::vector<double> out(path.values.size(), 0.0);
  simkit::CompensatedSum s;
  for (std::size_t j = 1; j < path.values.size(); ++j) {
    s.add(heat_kernel(eps, path.values[j - 1] - x));
    out[j] = path.dt * s.value();
  }
  return out;
}

double mk_prefactor(int k, double t) {
  double kf = 1.0;
  for (int i = 2; i <= k; ++i) kf *= i;
  return kf * std::pow(2.0 * std::numbers::pi, -0.5 * k) * std::pow(t, 0.25 * k) *
         std::pow(std::tgamma(0.25), k) / std::tgamma(0.25 * k + 1.0);
}

MkEstimate estimate_Mk(int k, double t, std::uint64_t replicas, std::uint64_t m,
                       std::uint64_t master_seed, std::uint64_t stream_base, double eps, bool strict) {
  require(k >= 1 && k <= 8, "k must be in 1..8");
  require(t > 0.0, "t must be positive");
  require(eps >= 0.0, "eps must be nonnegative");
  require(m >= brownian::kMinFineness, "fineness must be at least 1000");
  const auto kk = static_cast<std::size_t>(k);
  auto values = simkit::replica_values(
      [&](simkit::RngStream& rng) {
        const auto u = dirichlet(kk, 0.25, eps > 0.0, rng);
        // Segment lengths in walk steps.
        const double span = eps > 0.0 ? t * static_cast<double>(m) : static_cast<double>(m);
        std::vector<std::uint64_t> n(kk);
        for (std::size_t i = 0; i < kk; ++i)
          n[i] = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(span * u[i])));
        std::vector<std::uint64_t> b(kk);
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < kk; ++i) b[i] = (acc += n[i]);
        const auto seg = lattice::simulate_local_times(lattice::StepLaw::simple(), b, rng);
        std::vector<double> e(kk * kk);
        if (eps == 0.0) {
          for (std::size_t i = 0; i < kk; ++i)
            for (std::size_t j = i; j < kk; ++j)
              e[i * kk + j] = e[j * kk + i] =
                  static_cast<double>(lattice::mutual_inner(seg[i], seg[j])) *
                  std::pow(static_cast<double>(n[i]) * static_cast<double>(n[j]), -0.75);
          const auto g = brownian::gram_from_entries(kk, std::move(e));
          if (brownian::near_singular(g)) return std::numeric_limits<double>::quiet_NaN();
          return 1.0 / std::sqrt(g.det);
        }
        // Cumulative fields: prefix merges of the segments.
        std::vector<lattice::LocalTimeProfile> cum;
        for (std::size_t i = 0; i < kk; ++i) cum.push_back(i ? lattice::merge(cum.back(), seg[i]) : seg[0]);
        const double mm = std::pow(static_cast<double>(m), -1.5);
        for (std::size_t i = 0; i < kk; ++i)
          for (std::size_t j = i; j < kk; ++j)
            e[i * kk + j] = e[j * kk + i] = static_cast<double>(lattice::mutual_inner(cum[i], cum[j])) * mm;
        for (std::size_t i = 0; i < kk; ++i) e[i * kk + i] += eps;
        const auto g = brownian::gram_from_entries(kk, std::move(e));
        double w = 1.0;
        for (std::size_t i = 0; i < kk; ++i) w *= std::pow(static_cast<double>(n[i]) / static_cast<double>(m), 0.75);
        return w / std::sqrt(g.det);
      },
      replicas, master_seed, stream_base);
  std::vector<double> ok;
  for (double v : values)
    if (!std::isnan(v)) ok.push_back(v);
  MkEstimate out;
  out.rejected = values.size() - ok.size();
  out.rejection_rate = static_cast<double>(out.rejected) / static_cast<double>(values.size());
  if (strict && out.rejection_rate > brownian::kMaxRejectionRate)
    fail(ErrorCode::numerical, "near-singular Gram rejection rate above 0.1%; increase fineness");
  if (ok.empty()) fail(ErrorCode::degenerate, "every Gram sample was rejected");
  out.value = simkit::summarize(ok, master_seed);
  const double pre = mk_prefactor(k, eps > 0.0 ? t : t);
  out.value.value *= pre;
  out.value.std_error *= pre;
  return out;
}

//---------------------------------------------------------------------------//
BoxCountResult zero_set_boxcount(const DeltaPath& path, std::span<const double> scales,
                                 double threshold_exponent) {
  require(scales.size() >= 4, "at least 4 scales required");
  for (std::size_t i = 1; i < scales.size(); ++i)
    require(scales[i] < scales[i - 1], "scales must be decreasing");
  require(scales.front() / scales.back() >= 100.0 * (1.0 - 1e-12), "scales must span 2 decades");
  require(scales.back() >= path.dt, "finest scale below the path resolution");
  const auto& v = path.values;
  BoxCountResult r;
  bool any_sign_change = false;
  for (std::size_t j = 1; j < v.size(); ++j)
    if ((v[j - 1] < 0.0 && v[j] > 0.0) || (v[j - 1] > 0.0 && v[j] < 0.0)) any_sign_change = true;
  r.degenerate = !any_sign_change;

  const std::size_t last = v.size() - 1;
  for (double s : scales) {
    BoxCount bc;
    bc.scale = s;
    bc.boxes = static_cast<std::uint64_t>(std::ceil(path.horizon / s * (1.0 - 1e-12)));
    const double thr = threshold_exponent > 0.0 ? std::pow(s, threshold_exponent) : -1.0;
    for (std::uint64_t b = 0; b < bc.boxes; ++b) {
      const auto a = static_cast<std::size_t>(std::floor(static_cast<double>(b) * s / path.dt * (1.0 + 1e-12)));
      const auto e = std::min(last, static_cast<std::size_t>(std::floor(static_cast<double>(b + 1) * s / path.dt * (1.0 + 1e-12))));
      bool hit = false;
      bool pos = false, neg = false;
      for (std::size_t j = a; j <= e && !hit; ++j) {
        pos = pos || v[j] > 0.0;
        neg = neg || v[j] < 0.0;
        if (std::fabs(v[j]) < thr || (pos && neg)) hit = true;
      }
      bc.hits += hit;
    }
    r.table.push_back(bc);
  }
  // OLS of log hits on log(1/scale) over scales with hits.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& bc : r.table) {
    if (!bc.hits) continue;
    const double x = std::log(1.0 / bc.scale), y = std::log(static_cast<double>(bc.hits));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++n;
  }
  if (n >= 2) r.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return r;
}

DeltaPath sample_brownian_path(double horizon, double dt, simkit::RngStream& rng) {
  require(horizon > 0.0 && dt > 0.0, "horizon and dt must be positive");
  const auto points = static_cast<std::size_t>(std::floor(horizon / dt * (1.0 + 1e-12))) + 1;
  DeltaPath p;
  p.dt = dt;
  p.horizon = horizon;
  p.values.assign(points, 0.0);
  const double sd = std::sqrt(dt);
  for (std::size_t j = 1; j < points; ++j) p.values[j] = p.values[j - 1] + sd * rng.normal();
  return p;
}

}  // namespace rwrs::delta
