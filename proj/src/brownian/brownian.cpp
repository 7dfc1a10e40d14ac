// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include "brownian/brownian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "lattice_walk/walk.hpp"
#include "simkit/error.hpp"
#include "simkit/summation.hpp"

namespace rwrs::brownian {

double LocalTimeField::mass() const noexcept {
  simkit::CompensatedSum s;
  for (double v : values) s.add(v);
  return h * s.value();
}

double LocalTimeField::at(std::int64_t index) const noexcept {
  const auto j = index - origin_index;
  if (j < 0 || j >= static_cast<std::int64_t>(values.size())) return 0.0;
  return values[static_cast<std::size_t>(j)];
}

FieldSample sample_local_time_fields(std::span<const double> T_list, std::uint64_t m,
                                     simkit::RngStream& rng) {
  require(m >= kMinFineness, "fineness must be at least 1000");
  require(!T_list.empty(), "T_list must be nonempty");
  for (std::size_t i = 0; i < T_list.size(); ++i) {
    require(T_list[i] > 0.0 && std::isfinite(T_list[i]), "times must be positive");
    if (i) require(T_list[i - 1] < T_list[i], "times must be increasing");
  }
  const double sm = std::sqrt(static_cast<double>(m));
  std::vector<std::uint64_t> steps;
  for (double T : T_list) {
    const auto n = static_cast<std::uint64_t>(std::floor(static_cast<double>(m) * T));
    require(n >= 1, "fineness too small for the requested times");
    require(steps.empty() || n > steps.back(), "times collapse at this fineness");
    steps.push_back(n);
  }

  lattice::DenseCounter counter(static_cast<std::int64_t>(4.0 * std::sqrt(static_cast<double>(steps.back()))) + 16);
  std::vector<std::pair<std::int64_t, std::vector<std::uint32_t>>> snaps;
  std::int64_t pos = 0;
  std::uint64_t t = 0;
  for (const auto n : steps) {
    for (; t < n; ++t) {
      counter.visit(pos);
      pos += rng.bit() ? 1 : -1;
    }
    snaps.emplace_back(counter.lo(), counter.raw());
  }

  // Common window: occupied range of the final snapshot.
  const auto& last = snaps.back().second;
  std::size_t first = 0, end = last.size();
  while (first < end && last[first] == 0) ++first;
  while (end > first && last[end - 1] == 0) --end;
  const std::int64_t lo = snaps.back().first + static_cast<std::int64_t>(first);
  const std::size_t len = end - first;

  std::vector<std::vector<std::uint32_t>> counts(snaps.size(), std::vector<std::uint32_t>(len, 0));
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const auto& [slo, raw] = snaps[i];
    for (std::size_t j = 0; j < len; ++j) {
      const std::int64_t idx = lo + static_cast<std::int64_t>(j) - slo;
      if (idx >= 0 && idx < static_cast<std::int64_t>(raw.size()))
        counts[i][j] = raw[static_cast<std::size_t>(idx)];
    }
  }

  FieldSample out;
  auto make = [&](double horizon) {
    LocalTimeField f;
    f.origin_index = lo;
    f.h = 1.0 / sm;
    f.horizon = horizon;
    f.fineness = m;
    f.values.assign(len, 0.0);
    return f;
  };
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    auto cum = make(T_list[i]);
    auto inc = make(T_list[i] - (i ? T_list[i - 1] : 0.0));
    for (std::size_t j = 0; j < len; ++j) {
      cum.values[j] = counts[i][j] / sm;
      inc.values[j] = (counts[i][j] - (i ? counts[i - 1][j] : 0u)) / sm;
    }
    out.cumulative.push_back(std::move(cum));
    out.increments.push_back(std::move(inc));
  }
  return out;
}

std::vector<LocalTimeField> on_common_grid(std::span<const LocalTimeField> fields) {
  require(!fields.empty(), "no fields");
  std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = std::numeric_limits<std::int64_t>::min();
  for (const auto& f : fields) {
    require(f.h == fields[0].h, "fields have different grid spacing");
    lo = std::min(lo, f.origin_index);
    hi = std::max(hi, f.origin_index + static_cast<std::int64_t>(f.values.size()));
  }
  std::vector<LocalTimeField> out;
  for (const auto& f : fields) {
    LocalTimeField g = f;
    g.origin_index = lo;
    g.values.assign(static_cast<std::size_t>(hi - lo), 0.0);
    for (std::size_t j = 0; j < f.values.size(); ++j)
      g.values[static_cast<std::size_t>(f.origin_index - lo) + j] = f.values[j];
    out.push_back(std::move(g));
  }
  return out;
}

double GramSample::diag_product() const noexcept {
  double p = 1.0;
  for (std::size_t i = 0; i < k; ++i) p *= at(i, i);
  return p;
}

GramSample gram_from_entries(std::size_t k, std::vector<double> entries) {
  require(k >= 1 && entries.size() == k * k, "gram entries must be k x k");
  GramSample g;
  g.k = k;
  g.entries = std::move(entries);
  if (k == 1) {
    g.det = std::max(0.0, g.entries[0]);
    g.lambda_min = g.det;
    return g;
  }
  Eigen::MatrixXd a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  double trace = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    trace += g.entries[i * k + i];
    for (std::size_t j = 0; j < k; ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g.entries[i * k + j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorCode::numerical, "eigen decomposition failed");
  double det = 1.0, lmin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double ev = es.eigenvalues()[i];
    if (ev < 1e-14 * trace) ev = 0.0;
    det *= ev;
    lmin = std::min(lmin, ev);
  }
  g.det = det;
  g.lambda_min = lmin;
  return g;
}

GramSample gram_of_fields(std::span<const LocalTimeField> fields, GramNormalization norm) {
  require(!fields.empty(), "no fields");
  const auto& f0 = fields[0];
  for (const auto& f : fields)
    require(f.h == f0.h && f.origin_index == f0.origin_index && f.values.size() == f0.values.size(),
            "fields do not share a grid");
  const std::size_t k = fields.size();
  std::vector<double> scale(k, 1.0);
  if (norm == GramNormalization::scaled)
    for (std::size_t i = 0; i < k; ++i) {
      require(fields[i].horizon > 0.0, "scaled Gram needs positive horizons");
      scale[i] = std::pow(fields[i].horizon, -0.75);
    }
  std::vector<double> e(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      simkit::CompensatedSum s;
      const auto& a = fields[i].values;
      const auto& b = fields[j].values;
      for (std::size_t x = 0; x < a.size(); ++x) s.add(a[x] * b[x]);
      e[i * k + j] = e[j * k + i] = f0.h * s.value() * scale[i] * scale[j];
    }
  return gram_from_entries(k, std::move(e));
}

bool near_singular(const GramSample& g) noexcept {
  return !(g.det > 64.0 * std::numeric_limits<double>::epsilon() * g.diag_product());
}

CEstimate estimate_C(std::span<const double> T_list, std::uint64_t replicas, std::uint64_t m,
                     std::uint64_t master_seed, std::uint64_t stream_base, bool strict) {
  require(replicas > 0, "replicas must be positive");
  const std::vector<double> T(T_list.begin(), T_list.end());
  auto values = simkit::replica_values(
      [&](simkit::RngStream& rng) {
        const auto fs = sample_local_time_fields(T, m, rng);
        const auto g = gram_of_fields(fs.cumulative, GramNormalization::raw);
        if (near_singular(g)) return std::numeric_limits<double>::quiet_NaN();
        return 1.0 / std::sqrt(g.det);
      },
      replicas, master_seed, stream_base);
  std::vector<double> ok;
  ok.reserve(values.size());
  for (double v : values)
    if (!std::isnan(v)) ok.push_back(v);
  CEstimate out;
  out.rejected = values.size() - ok.size();
  out.rejection_rate = static_cast<double>(out.rejected) / static_cast<double>(values.size());
  if (strict && out.rejection_rate > kMaxRejectionRate)
    fail(ErrorCode::numerical, "near-singular Gram rejection rate above 0.1%; increase fineness");
  if (ok.empty()) fail(ErrorCode::degenerate, "every Gram sample was rejected");
  out.c = simkit::summarize(ok, master_seed);
  double factor = 1.0;
  for (std::size_t i = 0; i < T.size(); ++i) factor *= std::pow(T[i] - (i ? T[i - 1] : 0.0), 0.75);
  out.bound_ratio = out.c;
  out.bound_ratio.value *= factor;
  out.bound_ratio.std_error *= factor;
  return out;
}

//---------------------------------------------------------------------------//
double besq0_step(double y, double dt, simkit::RngStream& rng) {
  require(y >= 0.0 && dt > 0.0, "besq0_step needs y >= 0 and dt > 0");
  if (y == 0.0) return 0.0;
  std::poisson_distribution<std::uint64_t> pois(y / (2.0 * dt));
  const auto k = pois(rng);
  if (k == 0) return 0.0;
  std::gamma_distribution<double> gam(static_cast<double>(k), 2.0 * dt);
  return gam(rng);
}

double besq0_density(double eps, double y, double z) {
  if (y <= 0.0 || z <= 0.0) return 0.0;
  const double arg = std::sqrt(y * z) / eps;
  // exp(-(y+z)/2eps) I_1(arg) = exp(-(sqrt y - sqrt z)^2 / 2eps) * e^{-arg} I_1(arg);
  // the scaled form avoids overflow for large arguments.
  const double gap = std::sqrt(y) - std::sqrt(z);
  double scaled_i1;
  if (arg < 500.0)
    scaled_i1 = std::exp(-arg) * std::cyl_bessel_i(1.0, arg);
  else
    scaled_i1 = (1.0 - 3.0 / (8.0 * arg)) / std::sqrt(2.0 * std::numbers::pi * arg);
  return std::sqrt(y / z) / (2.0 * eps) * std::exp(-gap * gap / (2.0 * eps)) * scaled_i1;
}

double besq0_atom(double y, double dt) { return std::exp(-y / (2.0 * dt)); }

double besq0_total_integral(double y, simkit::RngStream& rng) {
  require(y > 0.0, "besq0_total_integral needs y > 0");
  double z;
  do z = rng.normal();
  while (z == 0.0);
  return (y / 2.0) * (y / 2.0) / (z * z);
}

double hitting_density(double y, double t) {
  if (t <= 0.0) return 0.0;
  const double a = y / 2.0;
  return a / std::sqrt(2.0 * std::numbers::pi * t * t * t) * std::exp(-a * a / (2.0 * t));
}

double hitting_cdf(double y, double t) {
  if (t <= 0.0) return 0.0;
  return std::erfc((y / 2.0) / std::sqrt(2.0 * t));
}

double besq0_path_integral(double y, double dx, simkit::RngStream& rng) {
  require(y > 0.0 && dx > 0.0, "besq0_path_integral needs y, dx > 0");
  simkit::CompensatedSum s;
  double cur = y;
  while (cur > 0.0) {
    const double next = besq0_step(cur, dx, rng);
    s.add(0.5 * dx * (cur + next));
    cur = next;
  }
  return s.value();
}

std::vector<double> ray_knight_profile(double level, std::uint64_t m, double x_max,
                                       simkit::RngStream& rng) {
  require(level > 0.0, "level must be positive");
  require(m >= 1 && x_max > 0.0, "fineness and window must be positive");
  const double sm = std::sqrt(static_cast<double>(m));
  const auto top = static_cast<std::int64_t>(std::ceil(x_max * sm));
  std::vector<std::uint64_t> n(static_cast<std::size_t>(top + 1), 0);
  const double target = level * sm;
  std::int64_t pos = 0;
  std::uint64_t steps = 0;
  n[0] = 1;
  while (static_cast<double>(n[0]) <= target) {
    if (++steps > kRayKnightStepCap) fail(ErrorCode::resource_limit, "ray-knight step cap exceeded");
    const bool up = rng.bit();
    if (pos == 0 && !up) {
      // Excursion below 0 returns to 0.
      ++n[0];
    } else if (pos == top && up) {
      ++n[static_cast<std::size_t>(top)];
    } else {
      pos += up ? 1 : -1;
      ++n[static_cast<std::size_t>(pos)];
    }
  }
  std::vector<double> out(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) out[i] = static_cast<double>(n[i]) / sm;
  return out;
}

double exit_local_time(std::uint64_t m, simkit::RngStream& rng) {
  require(m >= 1, "fineness must be positive");
  const auto a = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(m))));
  std::int64_t pos = 0;
  std::uint64_t visits = 0;
  while (pos > -a && pos < a) {
    if (pos == 0) ++visits;
    pos += rng.bit() ? 1 : -1;
  }
  return static_cast<double>(visits) / static_cast<double>(a);
}

}  // namespace rwrs::brownian
