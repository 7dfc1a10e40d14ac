// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include "app/commands.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "brownian/brownian.hpp"
#include "delta_process/delta.hpp"
#include "exact_oracle/oracle.hpp"
#include "harness/harness.hpp"
#include "simkit/error.hpp"

namespace rwrs::app {

namespace {

using harness::make_report;

// Disjoint stream blocks for the parts of one run; harness routines take
// further sub-blocks below these.
std::uint64_t block(std::uint64_t i) { return simkit::stream_space(4096 * (i + 1)); }

double z_score(double a, double sa, double b, double sb) {
  const double s = std::hypot(sa, sb);
  if (s == 0.0) return a == b ? 0.0 : std::numeric_limits<double>::infinity();
  return std::fabs(a - b) / s;
}

std::string join(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : ";") + std::to_string(x);
  return s;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  char buf[40];
  for (auto x : v) {
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    s += (s.empty() ? "" : ";") + std::string(buf, p);
  }
  return s;
}

void add_fit(RunResult& r, const std::optional<harness::ScalingFit>& fit) {
  if (!fit) return;
  r.summary.emplace_back("slope", fit->slope);
  r.summary.emplace_back("slope_se", fit->slope_se);
  r.summary.emplace_back("slope_ci_halfwidth", fit->slope_ci);
  r.summary.emplace_back("intercept", fit->intercept);
  r.summary.emplace_back("r2", fit->r2);
}

void slope_test(RunResult& r, const std::optional<harness::ScalingFit>& fit, double expect,
                double tol) {
  const double dev = fit ? std::fabs(fit->slope - expect) : std::numeric_limits<double>::infinity();
  r.tests.push_back(make_report("slope", "abs_dev", dev, fit ? fit->points.size() : 0, 0, tol));
}

//---------------------------------------------------------------------------//
RunResult analyze_law_cmd(const ExperimentConfig& cfg) {
  RunResult r;
  r.table.columns = {"law", "support", "probs", "sigma2", "d", "d0", "residue"};
  auto row = [&](const char* name, const lattice::Pmf& pmf) {
    const auto c = scenery::analyze_law(pmf);
    r.table.rows.push_back({std::string(name), cfg.text(std::string(name) + ".support"),
                            cfg.text(std::string(name) + ".probs"), c.sigma2,
                            static_cast<double>(c.d), static_cast<double>(c.d0),
                            static_cast<double>(c.residue)});
  };
  row("walk", cfg.step_law().pmf());
  row("scenery", cfg.scenery_law().pmf());
  const auto& c = cfg.scenery_law().constants();
  r.summary = {{"sigma2", c.sigma2},
               {"d", static_cast<double>(c.d)},
               {"d0", static_cast<double>(c.d0)}};
  return r;
}

RunResult return_curve_cmd(const ExperimentConfig& cfg) {
  const auto& step = cfg.step_law();
  const auto& scen = cfg.scenery_law();
  const auto n = cfg.u64s("params.n");
  const auto ratios = cfg.reals("params.ratios");
  const int k = static_cast<int>(ratios.size());
  const auto est = cfg.text("params.estimator") == "indicator" ? harness::Estimator::indicator
                                                                : harness::Estimator::conditional;
  const auto curve = harness::estimate_return_curve(step, scen, n, ratios, cfg.replicas(),
                                                    cfg.seed(), block(0), est,
                                                    cfg.allow_inadmissible());
  RunResult r;
  r.table.columns = {"n", "times", "estimate", "std_error", "replicas", "scaled"};
  const auto d0 = static_cast<std::uint64_t>(scen.d0());
  for (const auto& p : curve.points) {
    const double scaled = p.estimate.value * std::pow(static_cast<double>(p.n), 0.75 * k);
    r.table.rows.push_back({static_cast<double>(p.n), join(p.times), p.estimate.value,
                            p.estimate.std_error, static_cast<double>(p.estimate.replicas),
                            scaled});
    if (p.n % d0 != 0)
      r.tests.push_back(make_report("inadmissible_n" + std::to_string(p.n) + "_is_zero", "abs_dev",
                                    std::fabs(p.estimate.value), p.n, 0, 0.0));
  }
  add_fit(r, curve.fit);
  if (cfg.has("params.expect_slope"))
    slope_test(r, curve.fit, cfg.real("params.expect_slope"), cfg.real("params.slope_tol"));

  // Range of the walk against n^{1/2 + gamma} at the largest n.
  const auto nmax = n.back();
  const double gamma = cfg.real("tuning.gamma");
  const double bound = std::pow(static_cast<double>(nmax), 0.5 + gamma);
  const auto exceed = simkit::run_replicated(
      [&](simkit::RngStream& rng) {
        const std::uint64_t b[] = {nmax};
        const auto prof = lattice::simulate_local_times(step, b, rng);
        return lattice::profile_stats(prof[0]).range > bound ? 1.0 : 0.0;
      },
      cfg.u64("params.diagnostic_replicas"), cfg.seed(), block(1));
  r.summary.emplace_back("range_exceed_fraction", exceed.value);

  if (const auto reps = cfg.u64("params.constant_replicas"); reps > 0) {
    const auto& last = curve.points.back();
    const double s = std::pow(static_cast<double>(last.n), 0.75);
    const double lhs = last.estimate.value * s, lhs_se = last.estimate.std_error * s;
    const double T1[] = {1.0};
    const auto c = brownian::estimate_C(T1, reps, cfg.u64("params.fineness"), cfg.seed(), block(2));
    // Walk variance v rescales the Gram matrix by v^{-1/2}.
    const double f = static_cast<double>(scen.d()) / (scen.sigma() * std::sqrt(2 * std::numbers::pi)) *
                     std::pow(step.pmf().variance(), 0.25);
    r.summary.emplace_back("constant_walk", lhs);
    r.summary.emplace_back("constant_walk_se", lhs_se);
    r.summary.emplace_back("constant_brownian", f * c.c.value);
    r.summary.emplace_back("constant_brownian_se", f * c.c.std_error);
    r.tests.push_back(make_report("constant", "z", z_score(lhs, lhs_se, f * c.c.value, f * c.c.std_error),
                                  last.estimate.replicas, c.c.replicas, 3.0));
  }

  if (cfg.has("params.shadow_budget")) {
    const auto sh = harness::uniformity_shadow(
        step, scen, cfg.u64("params.shadow_n"), static_cast<int>(cfg.u64("params.shadow_per_axis")),
        cfg.u64("params.shadow_replicas"), cfg.real("params.shadow_budget"), cfg.seed(), block(3),
        cfg.real("tuning.theta"));
    r.summary.emplace_back("shadow_cells", static_cast<double>(sh.cells.size()));
    r.summary.emplace_back("shadow_max_upper", sh.max_upper);
    r.tests.push_back(make_report("uniformity_shadow", "budget", sh.max_upper, sh.cells.size(),
                                  cfg.u64("params.shadow_replicas"), sh.budget));
  }
  return r;
}

RunResult counting_cmd(const ExperimentConfig& cfg) {
  const int k = static_cast<int>(cfg.u64("params.k"));
  const auto n = cfg.u64s("params.n");
  const auto curve = harness::counting_moment_curve(cfg.step_law(), cfg.scenery_law(), k, n,
                                                    cfg.replicas(), cfg.seed(), block(0));
  RunResult r;
  r.table.columns = {"n", "moment", "std_error", "replicas", "scaled"};
  for (const auto& p : curve.points)
    r.table.rows.push_back({static_cast<double>(p.n), p.estimate.value, p.estimate.std_error,
                            static_cast<double>(p.estimate.replicas),
                            p.estimate.value / std::pow(static_cast<double>(p.n), k / 4.0)});
  add_fit(r, curve.fit);
  r.summary.emplace_back("constant", curve.constant.value);
  r.summary.emplace_back("constant_se", curve.constant.std_error);
  r.summary.emplace_back("law_factor", curve.law_factor);
  const double expect = cfg.has("params.expect_slope") ? cfg.real("params.expect_slope") : k / 4.0;
  static const double default_tol[] = {0.04, 0.06, 0.08};
  const double tol = cfg.has("params.slope_tol") ? cfg.real("params.slope_tol") : default_tol[k - 1];
  slope_test(r, curve.fit, expect, tol);
  if (const auto reps = cfg.u64("params.mk_replicas"); reps > 0) {
    const auto mk = delta::estimate_Mk(k, 1.0, reps, cfg.u64("params.fineness"), cfg.seed(), block(1));
    const double target = curve.law_factor * mk.value.value;
    const double target_se = curve.law_factor * mk.value.std_error;
    r.summary.emplace_back("mk", mk.value.value);
    r.summary.emplace_back("mk_se", mk.value.std_error);
    r.summary.emplace_back("constant_target", target);
    r.tests.push_back(make_report("constant", "z",
                                  z_score(curve.constant.value, curve.constant.std_error, target, target_se),
                                  curve.constant.replicas, mk.value.replicas, 3.0));
  }
  return r;
}

RunResult gram_cmd(const ExperimentConfig& cfg) {
  const auto T = cfg.reals("params.T");
  RunResult r;
  r.tests = harness::gram_convergence_test(cfg.step_law(), cfg.u64("params.n"), T, cfg.replicas(),
                                           cfg.u64("params.fineness"), cfg.seed(),
                                           cfg.real("params.threshold"));
  r.table.columns = {"entry", "ks", "threshold", "pass"};
  double worst = 0.0;
  for (const auto& t : r.tests) {
    r.table.rows.push_back({t.name, t.value, t.threshold, t.pass ? 1.0 : 0.0});
    worst = std::max(worst, t.value);
  }
  r.summary.emplace_back("max_ks", worst);
  return r;
}

RunResult estimate_c_cmd(const ExperimentConfig& cfg) {
  std::vector<std::vector<double>> sets;
  std::vector<std::string> parts;
  boost::algorithm::split(parts, cfg.text("params.T_sets"), [](char c) { return c == ';'; });
  for (auto& p : parts) {
    std::vector<std::string> xs;
    boost::algorithm::split(xs, p, [](char c) { return c == ','; });
    std::vector<double> v;
    for (auto& x : xs) v.push_back(std::stod(boost::algorithm::trim_copy(x)));
    sets.push_back(v);
  }
  const auto m = cfg.u64("params.fineness");
  RunResult r;
  r.table.columns = {"T", "k", "c", "c_se", "bound_ratio", "bound_ratio_se", "rejected",
                     "rejection_rate"};
  std::vector<brownian::CEstimate> est;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    est.push_back(brownian::estimate_C(sets[i], cfg.replicas(), m, cfg.seed(), block(i), false));
    const auto& e = est.back();
    r.table.rows.push_back({join(sets[i]), static_cast<double>(sets[i].size()), e.c.value,
                            e.c.std_error, e.bound_ratio.value, e.bound_ratio.std_error,
                            static_cast<double>(e.rejected), e.rejection_rate});
    r.tests.push_back(make_report("rejection_rate[" + join(sets[i]) + "]", "rate", e.rejection_rate,
                                  cfg.replicas(), m, brownian::kMaxRejectionRate));
  }
  // k = 1: c T^{3/4} is the same for every T.
  std::optional<std::size_t> first1;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].size() != 1) continue;
    if (!first1) {
      first1 = i;
      continue;
    }
    const auto& a = est[*first1].bound_ratio;
    const auto& b = est[i].bound_ratio;
    r.tests.push_back(make_report("scaling[" + join(sets[i]) + "]", "z",
                                  z_score(a.value, a.std_error, b.value, b.std_error), a.replicas,
                                  b.replicas, 3.0));
  }
  // k >= 2: bound ratio in [E|L_1|^{-1}^k, band E|L_1|^{-1}^k].
  bool any_multi = false;
  for (const auto& s : sets) any_multi = any_multi || s.size() > 1;
  if (any_multi) {
    simkit::Estimate ref;
    std::optional<std::size_t> unit;
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (sets[i].size() == 1 && sets[i][0] == 1.0) unit = i;
    if (unit) {
      ref = est[*unit].c;
    } else {
      const auto reps = cfg.u64("params.reference_replicas") ? cfg.u64("params.reference_replicas")
                                                             : cfg.replicas();
      const double T1[] = {1.0};
      ref = brownian::estimate_C(T1, reps, m, cfg.seed(), block(sets.size())).c;
    }
    r.summary.emplace_back("reference_inverse_norm", ref.value);
    r.summary.emplace_back("reference_inverse_norm_se", ref.std_error);
    const double band = cfg.real("params.band_factor");
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (sets[i].size() < 2) continue;
      const double lo = std::pow(ref.value, static_cast<double>(sets[i].size()));
      const double hi = band * lo;
      const auto& b = est[i].bound_ratio;
      // Outside the band by more than 3 standard errors.
      const double excess = std::max({0.0, lo - (b.value + 3 * b.std_error), (b.value - 3 * b.std_error) - hi});
      r.tests.push_back(make_report("band[" + join(sets[i]) + "]", "band_excess", excess,
                                    b.replicas, 0, 0.0));
    }
  }
  return r;
}

RunResult besq_cmd(const ExperimentConfig& cfg) {
  const double y = cfg.real("params.y"), dt = cfg.real("params.dt");
  const auto N = cfg.replicas();
  const auto v = simkit::replica_values(
      [&](simkit::RngStream& rng) { return brownian::besq0_step(y, dt, rng); }, N, cfg.seed(),
      block(0));
  RunResult r;
  const double atom = brownian::besq0_atom(y, dt);
  double zeros = 0;
  for (double x : v) zeros += x == 0.0;
  const double pz = zeros / static_cast<double>(N);
  r.summary.emplace_back("atom_exact", atom);
  r.summary.emplace_back("atom_mc", pz);
  r.tests.push_back(make_report("extinction", "z",
                                z_score(pz, std::sqrt(atom * (1 - atom) / static_cast<double>(N)), atom, 0.0),
                                N, 0, 3.0));

  // Equal-width bins on (0, hi]; an overflow bin takes the remaining mass.
  const auto B = cfg.u64("params.bins");
  const double hi = y + 6.0 * std::sqrt(4.0 * y * dt), w = hi / static_cast<double>(B);
  std::vector<double> obs(B + 1, 0.0), exp(B + 1, 0.0);
  for (double x : v)
    if (x > 0.0) obs[std::min<std::uint64_t>(B, static_cast<std::uint64_t>(x / w))] += 1;
  double inside = 0.0;
  for (std::uint64_t b = 0; b < B; ++b) {
    constexpr int sub = 64;
    double s = 0;
    for (int q = 0; q <= sub; ++q) {
      const double z = static_cast<double>(b) * w + w * q / sub;
      const double c = (q == 0 || q == sub) ? 1 : (q % 2 ? 4 : 2);
      s += c * brownian::besq0_density(dt, y, z);
    }
    exp[b] = s * w / (3.0 * sub) * static_cast<double>(N);
    inside += exp[b];
  }
  exp[B] = std::max(0.0, (1.0 - atom) * static_cast<double>(N) - inside);
  const auto chi = harness::chi_square(obs, exp);
  const double crit = boost::math::quantile(boost::math::chi_squared(chi.dof), 1.0 - 1e-3);
  r.tests.push_back(make_report("positive_part", "chi2", chi.statistic, N, 0, crit));
  r.summary.emplace_back("chi2", chi.statistic);
  r.summary.emplace_back("chi2_dof", chi.dof);
  r.summary.emplace_back("chi2_p_value", chi.p_value);
  r.table.columns = {"bin_lo", "bin_hi", "observed", "expected"};
  for (std::uint64_t b = 0; b <= B; ++b)
    r.table.rows.push_back({static_cast<double>(b) * w,
                            b < B ? static_cast<double>(b + 1) * w : std::numeric_limits<double>::infinity(),
                            obs[b], exp[b]});

  const double hy = cfg.real("params.hit_y");
  const auto hn = cfg.u64("params.hit_samples");
  const auto h = simkit::replica_values(
      [&](simkit::RngStream& rng) { return brownian::besq0_total_integral(hy, rng); }, hn,
      cfg.seed(), block(1));
  const double ks = harness::ks_one_sample(h, [&](double t) { return brownian::hitting_cdf(hy, t); });
  r.tests.push_back(make_report("total_integral", "KS", ks, hn, 0, harness::ks_threshold(hn)));
  const double f21 = brownian::hitting_density(2.0, 1.0);
  r.summary.emplace_back("hitting_density_2_1", f21);
  r.tests.push_back(make_report("hitting_density_2_1", "abs_dev", std::fabs(f21 - 0.2420), 0, 0, 5e-5));
  return r;
}

RunResult ray_knight_cmd(const ExperimentConfig& cfg) {
  const double level = cfg.real("params.level"), off = cfg.real("params.offset");
  const auto m = cfg.u64("params.fineness");
  const auto idx = static_cast<std::size_t>(std::llround(off * std::sqrt(static_cast<double>(m))));
  const auto cols = simkit::replica_vectors(
      [&](simkit::RngStream& rng, std::span<double> out) {
        const auto prof = brownian::ray_knight_profile(level, m, 1.5 * off, rng);
        out[0] = prof[idx];
        out[1] = brownian::besq0_step(level, off, rng);
        out[2] = brownian::exit_local_time(m, rng);
      },
      3, cfg.replicas(), cfg.seed(), block(0));
  RunResult r;
  const double thr = cfg.real("params.threshold");
  const auto R = cfg.replicas();
  const double ks_rk = harness::ks_two_sample(cols[0], cols[1]);
  const double ks_exit = harness::ks_one_sample(
      cols[2], [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-x); });
  r.tests.push_back(make_report("ray_knight", "KS", ks_rk, R, R, thr));
  r.tests.push_back(make_report("exit_local_time", "KS", ks_exit, R, 0, thr));
  r.table.columns = {"sample", "mean", "reference_mean", "variance", "reference_variance"};
  auto moments = [&](const std::vector<double>& x) {
    const auto e = simkit::summarize(x, cfg.seed());
    const double var = e.std_error * e.std_error * static_cast<double>(x.size());
    return std::pair{e.value, var};
  };
  const auto [m0, v0] = moments(cols[0]);
  const auto [m1, v1] = moments(cols[1]);
  const auto [m2, v2] = moments(cols[2]);
  r.table.rows.push_back({std::string("walk_profile"), m0, level, v0, 4 * level * off});
  r.table.rows.push_back({std::string("besq0"), m1, level, v1, 4 * level * off});
  r.table.rows.push_back({std::string("exit_local_time"), m2, 1.0, v2, 1.0});
  r.summary = {{"ks_ray_knight", ks_rk}, {"ks_exit", ks_exit}};
  return r;
}

RunResult delta_localtime_cmd(const ExperimentConfig& cfg) {
  const auto m = cfg.u64("params.fineness");
  const double eps = cfg.real("params.eps"), dt = cfg.real("params.dt");
  const auto R = cfg.replicas();
  RunResult r;
  r.table.columns = {"quantity", "x", "value", "std_error"};
  const double tol = cfg.real("params.occupation_tol");
  const std::pair<double, double> I[] = {{0.0, 0.1}, {-0.05, 0.15}};
  for (std::size_t j = 0; j < 2; ++j) {
    const auto o = delta::occupation_identity(I[j].first, I[j].second, eps, R, dt, m, cfg.seed(), block(j));
    r.table.rows.push_back({std::string("occupation"), static_cast<double>(j), o.occupation.value, o.occupation.std_error});
    r.table.rows.push_back({std::string("mollified_integral"), static_cast<double>(j), o.mollified.value, o.mollified.std_error});
    r.tests.push_back(make_report("occupation[" + join(std::vector<double>{I[j].first, I[j].second}) + "]",
                                  "abs_dev", o.rel_error, R, 0, tol));
  }
  const auto h = delta::holder_moments(cfg.real("params.holder_eps"), R, cfg.real("params.holder_dt"), m,
                                       cfg.seed(), block(2));
  for (std::size_t j = 0; j < h.lags.size(); ++j) {
    r.table.rows.push_back({std::string("space_increment_moment"), h.lags[j], h.space[j], 0.0});
    r.table.rows.push_back({std::string("time_moment"), h.lags[j], h.time[j], 0.0});
  }
  r.summary.emplace_back("holder_space_slope", h.space_slope);
  r.summary.emplace_back("holder_time_slope", h.time_slope);
  r.tests.push_back(make_report("holder_space", "shortfall", 0.30 - h.space_slope, R, 0, 0.0));
  r.tests.push_back(make_report("holder_time", "shortfall", 0.45 - h.time_slope, R, 0, 0.0));

  // Second moment at a resolvable eps, against the smoothed Gram expression
  // and against the eps -> 0 limit M_{2,1}(0).
  const double me = cfg.real("params.moment_eps");
  const auto mr = cfg.u64("params.moment_replicas"), kr = cfg.u64("params.mk_replicas");
  const auto path = delta::smoothed_moment_path(2, me, 1.0, mr, dt, m, cfg.seed(), block(3));
  const auto smooth = delta::estimate_Mk(2, 1.0, kr, m, cfg.seed(), block(4), me);
  const auto limit = delta::estimate_Mk(2, 1.0, kr, m, cfg.seed(), block(5));
  r.table.rows.push_back({std::string("second_moment_path"), me, path.value, path.std_error});
  r.table.rows.push_back({std::string("second_moment_gram"), me, smooth.value.value, smooth.value.std_error});
  r.table.rows.push_back({std::string("M_2_1"), 0.0, limit.value.value, limit.value.std_error});
  r.tests.push_back(make_report("moment_smoothed_gram", "z",
                                z_score(path.value, path.std_error, smooth.value.value, smooth.value.std_error),
                                mr, kr, 3.0));
  r.tests.push_back(make_report("moment_identity", "z",
                                z_score(path.value, path.std_error, limit.value.value, limit.value.std_error),
                                mr, kr, 3.0));
  r.summary.emplace_back("second_moment_path", path.value);
  r.summary.emplace_back("M_2_1", limit.value.value);
  return r;
}

RunResult scaling_cmd(const ExperimentConfig& cfg) {
  RunResult r;
  r.table.columns = {"T", "ks", "threshold", "pass"};
  for (double T : cfg.reals("params.T")) {
    auto t = harness::scaling_law_test(T, cfg.replicas(), cfg.seed(), cfg.real("params.eps"),
                                       cfg.u64("params.fineness"), cfg.real("params.dt"),
                                       cfg.real("params.threshold"));
    r.table.rows.push_back({T, t.value, t.threshold, t.pass ? 1.0 : 0.0});
    r.tests.push_back(t);
  }
  return r;
}

RunResult correlation_cmd(const ExperimentConfig& cfg) {
  const auto cr = harness::correlation_ratio(cfg.u64("params.n"), cfg.real("params.t"), cfg.replicas(),
                                             cfg.seed(), cfg.u64("params.fineness"),
                                             cfg.u64("params.brownian_replicas"), cfg.step_law(),
                                             cfg.scenery_law());
  constexpr double z95 = 1.959963984540054;
  RunResult r;
  r.table.columns = {"side", "value", "std_error", "ci_lo", "ci_hi"};
  for (auto [name, e] : {std::pair{"walk", cr.lhs}, std::pair{"brownian", cr.rhs}}) {
    r.table.rows.push_back({std::string(name), e.value, e.std_error, e.value - z95 * e.std_error,
                            e.value + z95 * e.std_error});
    r.tests.push_back(make_report(std::string(name) + "_exceeds_1", "shortfall",
                                  1.0 - (e.value - z95 * e.std_error), e.replicas, 0, 0.0));
  }
  r.tests.insert(r.tests.begin(),
                 make_report("agreement", "z",
                             z_score(cr.lhs.value, cr.lhs.std_error, cr.rhs.value, cr.rhs.std_error),
                             cr.lhs.replicas, cr.rhs.replicas, 3.0));
  r.summary = {{"lhs", cr.lhs.value}, {"rhs", cr.rhs.value},
               {"rejected", static_cast<double>(cr.rejected)}};
  return r;
}

RunResult boxcount_cmd(const ExperimentConfig& cfg) {
  const bool is_delta = cfg.text("params.process") == "delta";
  const auto scales = delta::dyadic_scales(static_cast<int>(cfg.u64("params.scale_lo")),
                                           static_cast<int>(cfg.u64("params.scale_hi")));
  const double dt = cfg.real("params.dt"), tol = cfg.real("params.slope_tol");
  const auto m = cfg.u64("params.fineness");
  RunResult r;
  r.table.columns = {"process", "threshold_exponent", "mean_slope", "std_error", "degenerate", "paths"};
  auto run = [&](delta::PathKind kind, double H, double expect, std::uint64_t b, const char* name) {
    const auto s = delta::boxcount_slopes(kind, cfg.replicas(), dt, m, scales, H, cfg.seed(), block(b));
    r.table.rows.push_back({std::string(name), H, s.mean_slope.value, s.mean_slope.std_error,
                            static_cast<double>(s.degenerate), static_cast<double>(cfg.replicas())});
    r.tests.push_back(make_report(std::string(name) + "_slope", "abs_dev",
                                  std::fabs(s.mean_slope.value - expect), s.mean_slope.replicas, 0, tol));
    r.summary.emplace_back(std::string(name) + "_slope", s.mean_slope.value);
  };
  if (is_delta && cfg.u64("params.calibrate")) run(delta::PathKind::brownian, 0.5, 0.5, 0, "brownian");
  const double H = cfg.has("params.threshold_exponent") ? cfg.real("params.threshold_exponent")
                                                         : (is_delta ? 0.75 : 0.5);
  const double expect = cfg.has("params.expect_slope") ? cfg.real("params.expect_slope")
                                                        : (is_delta ? 0.25 : 0.5);
  run(is_delta ? delta::PathKind::delta : delta::PathKind::brownian, H, expect, 1,
      is_delta ? "delta" : "brownian");
  return r;
}

RunResult oracle_cmd(const ExperimentConfig& cfg) {
  const auto& step = cfg.step_law();
  const auto& scen = cfg.scenery_law();
  const auto n = cfg.u64s("params.n");
  const auto ratios = cfg.reals("params.ratios");
  const auto curve = harness::estimate_return_curve(step, scen, n, ratios, cfg.replicas(), cfg.seed(),
                                                    block(0), harness::Estimator::conditional,
                                                    cfg.allow_inadmissible());
  RunResult r;
  r.table.columns = {"n", "times", "exact", "exact_fraction", "estimate", "std_error", "z"};
  for (const auto& p : curve.points) {
    const auto ex = oracle::exact_joint_return(step, scen, p.times);
    const double z = z_score(p.estimate.value, p.estimate.std_error, ex.value, 0.0);
    r.table.rows.push_back({static_cast<double>(p.n), join(p.times), ex.value, ex.exact,
                            p.estimate.value, p.estimate.std_error, z});
    r.tests.push_back(make_report("oracle_n" + std::to_string(p.n), "z", z, p.estimate.replicas, 0, 3.0));
    if (ratios.size() == 1 && p.n == 2 && step.pmf().is_rademacher() && scen.pmf().is_rademacher())
      r.tests.push_back(make_report("p2_is_half", "abs_dev", std::fabs(ex.value - 0.5), 0, 0, 0.0));
  }
  const auto d0 = static_cast<std::uint64_t>(scen.d0());
  if (ratios.size() == 1 && d0 > 1) {
    const auto odd_max = cfg.u64("params.odd_max");
    double worst = 0.0;
    std::uint64_t count = 0;
    for (std::uint64_t m = 1; m <= odd_max; ++m) {
      if (m % d0 == 0) continue;
      const std::uint64_t t[] = {m};
      worst = std::max(worst, std::fabs(oracle::exact_joint_return(step, scen, t).value));
      ++count;
    }
    if (count) r.tests.push_back(make_report("inadmissible_exact_zero", "abs_dev", worst, count, 0, 0.0));
  }
  return r;
}

}  // namespace

RunResult run_command(const ExperimentConfig& cfg) {
  static const std::map<std::string, std::function<RunResult(const ExperimentConfig&)>> table = {
      {"analyze-law", analyze_law_cmd},   {"return-curve", return_curve_cmd},
      {"counting-moments", counting_cmd}, {"gram", gram_cmd},
      {"estimate-c", estimate_c_cmd},     {"besq-check", besq_cmd},
      {"ray-knight", ray_knight_cmd},     {"delta-localtime", delta_localtime_cmd},
      {"scaling-test", scaling_cmd},      {"correlation-ratio", correlation_cmd},
      {"boxcount", boxcount_cmd},         {"oracle", oracle_cmd},
  };
  const auto it = table.find(cfg.command());
  if (it == table.end()) fail(ErrorCode::invalid_argument, "unknown subcommand " + cfg.command());
  auto r = it->second(cfg);
  r.command = cfg.command();
  return r;
}

}  // namespace rwrs::app
