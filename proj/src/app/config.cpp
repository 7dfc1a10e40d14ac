// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include "app/config.hpp"

#include <algorithm>
#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "simkit/error.hpp"

namespace rwrs::app {

namespace {

enum class Kind { u64, real, u64_list, real_list, text };

// def == nullptr: required.  def == "": optional without a default.
struct Field {
  const char* key;
  Kind kind;
  const char* def;
};

struct Schema {
  const char* command;
  std::uint64_t replicas;
  std::vector<Field> params;
};

const std::vector<Schema>& schemas() {
  static const std::vector<Schema> s = {
      {"analyze-law", 1, {}},
      {"return-curve",
       10000,
       {{"n", Kind::u64_list, nullptr},
        {"ratios", Kind::real_list, "1"},
        {"estimator", Kind::text, "conditional"},
        {"expect_slope", Kind::real, ""},
        {"slope_tol", Kind::real, "0.04"},
        {"constant_replicas", Kind::u64, "0"},
        {"fineness", Kind::u64, "65536"},
        {"diagnostic_replicas", Kind::u64, "200"},
        {"shadow_budget", Kind::real, ""},
        {"shadow_n", Kind::u64, ""},
        {"shadow_per_axis", Kind::u64, "5"},
        {"shadow_replicas", Kind::u64, "1000"}}},
      {"counting-moments",
       10000,
       {{"k", Kind::u64, "1"},
        {"n", Kind::u64_list, nullptr},
        {"expect_slope", Kind::real, ""},
        {"slope_tol", Kind::real, ""},
        {"mk_replicas", Kind::u64, "0"},
        {"fineness", Kind::u64, "65536"}}},
      {"gram",
       10000,
       {{"n", Kind::u64, "65536"},
        {"T", Kind::real_list, "1, 2"},
        {"fineness", Kind::u64, "65536"},
        {"threshold", Kind::real, "0.03"}}},
      {"estimate-c",
       4000,
       {{"T_sets", Kind::text, "0.25; 1; 4"},
        {"fineness", Kind::u64, "65536"},
        {"band_factor", Kind::real, "10"},
        {"reference_replicas", Kind::u64, "0"}}},
      {"besq-check",
       1000000,
       {{"y", Kind::real, "1"},
        {"dt", Kind::real, "1"},
        {"bins", Kind::u64, "50"},
        {"hit_y", Kind::real, "2"},
        {"hit_samples", Kind::u64, "100000"}}},
      {"ray-knight",
       40000,
       {{"level", Kind::real, "1"},
        {"fineness", Kind::u64, "65536"},
        {"offset", Kind::real, "0.5"},
        {"threshold", Kind::real, "0.02"}}},
      {"delta-localtime",
       200,
       {{"eps", Kind::real, "0.0001"},
        {"fineness", Kind::u64, "65536"},
        {"dt", Kind::real, "0.000244140625"},
        {"holder_eps", Kind::real, "9.5367431640625e-07"},
        {"holder_dt", Kind::real, "1.52587890625e-05"},
        {"moment_eps", Kind::real, "0.0001"},
        {"moment_replicas", Kind::u64, "4000"},
        {"mk_replicas", Kind::u64, "20000"},
        {"occupation_tol", Kind::real, "0.05"}}},
      {"scaling-test",
       10000,
       {{"T", Kind::real_list, "0.5, 2"},
        {"eps", Kind::real, "0.05"},
        {"fineness", Kind::u64, "4096"},
        {"dt", Kind::real, "0.000244140625"},
        {"threshold", Kind::real, "0.03"}}},
      {"correlation-ratio",
       10000,
       {{"n", Kind::u64, "4096"},
        {"t", Kind::real, "1"},
        {"fineness", Kind::u64, "65536"},
        {"brownian_replicas", Kind::u64, "0"}}},
      {"boxcount",
       1000,
       {{"process", Kind::text, "delta"},
        {"fineness", Kind::u64, "65536"},
        {"dt", Kind::real, "1.52587890625e-05"},
        {"scale_lo", Kind::u64, "5"},
        {"scale_hi", Kind::u64, "14"},
        {"threshold_exponent", Kind::real, ""},
        {"expect_slope", Kind::real, ""},
        {"slope_tol", Kind::real, "0.05"},
        {"calibrate", Kind::u64, "1"}}},
      {"oracle",
       4000,
       {{"n", Kind::u64_list, "2, 4, 6, 8, 10, 12"},
        {"ratios", Kind::real_list, "1"},
        {"odd_max", Kind::u64, "11"}}},
  };
  return s;
}

const std::vector<Field>& tuning_fields() {
  static const std::vector<Field> f = {{"gamma", Kind::real, "0.15"}, {"theta", Kind::real, "0.5"}};
  return f;
}

// Shortest text that parses back to the same double.
std::string fmt_real(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
  const auto t = boost::algorithm::trim_copy(s);
  if (t.empty()) return false;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc() && p == t.data() + t.size();
}

bool parse_real(const std::string& s, double& out) {
  const auto t = boost::algorithm::trim_copy(s);
  if (t.empty()) return false;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc() && p == t.data() + t.size() && std::isfinite(out);
}

bool parse_i64(const std::string& s, std::int64_t& out) {
  const auto t = boost::algorithm::trim_copy(s);
  if (t.empty()) return false;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc() && p == t.data() + t.size();
}

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, s, [sep](char c) { return c == sep; });
  for (auto& p : parts) boost::algorithm::trim(p);
  return parts;
}

// Canonical text for a value of the given kind, or an error message.
std::optional<std::string> canonical(Kind kind, const std::string& raw, std::string& err) {
  switch (kind) {
    case Kind::u64: {
      std::uint64_t v;
      if (!parse_u64(raw, v)) return err = "expected a nonnegative integer", std::nullopt;
      return std::to_string(v);
    }
    case Kind::real: {
      double v;
      if (!parse_real(raw, v)) return err = "expected a finite real number", std::nullopt;
      return fmt_real(v);
    }
    case Kind::u64_list:
    case Kind::real_list: {
      std::string out;
      for (const auto& p : split_list(raw)) {
        std::string e;
        auto c = canonical(kind == Kind::u64_list ? Kind::u64 : Kind::real, p, e);
        if (!c) return err = "list entry '" + p + "': " + e, std::nullopt;
        out += (out.empty() ? "" : ", ") + *c;
      }
      return out;
    }
    case Kind::text:
      return boost::algorithm::trim_copy(raw);
  }
  return std::nullopt;
}

// "a, b, c" with probabilities "1/2" or decimals.  Rational when every entry
// is a fraction or integer.
std::optional<lattice::Pmf> parse_pmf(const std::string& section, const std::string& support,
                                      const std::string& probs, std::vector<std::string>& errors) {
  std::vector<std::int64_t> xs;
  bool bad = false;
  for (const auto& p : split_list(support)) {
    std::int64_t v;
    if (!parse_i64(p, v)) {
      errors.push_back(section + ".support: '" + p + "' is not an integer");
      bad = true;
    }
    xs.push_back(v);
  }
  std::vector<lattice::Ratio> rs;
  std::vector<double> ds;
  bool rational = true;
  for (const auto& p : split_list(probs)) {
    const auto slash = p.find('/');
    std::int64_t num = 0, den = 1;
    double d;
    if (slash != std::string::npos && parse_i64(p.substr(0, slash), num) &&
        parse_i64(p.substr(slash + 1), den) && den > 0) {
      rs.push_back({num, den});
      ds.push_back(static_cast<double>(num) / static_cast<double>(den));
    } else if (parse_i64(p, num)) {
      rs.push_back({num, 1});
      ds.push_back(static_cast<double>(num));
    } else if (parse_real(p, d)) {
      rational = false;
      ds.push_back(d);
    } else {
      errors.push_back(section + ".probs: '" + p + "' is not a probability");
      bad = true;
    }
  }
  if (bad) return std::nullopt;
  if (xs.size() != ds.size()) {
    errors.push_back(section + ": support and probs must have the same length");
    return std::nullopt;
  }
  try {
    return rational ? lattice::Pmf(xs, rs) : lattice::Pmf(xs, ds);
  } catch (const Error& e) {
    errors.push_back(section + ": " + e.what());
  }
  return std::nullopt;
}

const Schema* find_schema(const std::string& command) {
  for (const auto& s : schemas())
    if (command == s.command) return &s;
  return nullptr;
}

std::vector<std::uint64_t> as_u64s(const std::string& s) {
  std::vector<std::uint64_t> out;
  if (boost::algorithm::trim_copy(s).empty()) return out;
  for (const auto& p : split_list(s)) {
    std::uint64_t v = 0;
    parse_u64(p, v);
    out.push_back(v);
  }
  return out;
}

std::vector<double> as_reals(const std::string& s) {
  std::vector<double> out;
  if (boost::algorithm::trim_copy(s).empty()) return out;
  for (const auto& p : split_list(s)) {
    double v = 0;
    parse_real(p, v);
    out.push_back(v);
  }
  return out;
}

template <class T>
bool strictly_increasing(const std::vector<T>& v) {
  return std::adjacent_find(v.begin(), v.end(), [](T a, T b) { return a >= b; }) == v.end();
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& s : schemas()) v.emplace_back(s.command);
    return v;
  }();
  return names;
}

//---------------------------------------------------------------------------//
bool ExperimentConfig::has(const std::string& key) const {
  for (const auto& [k, v] : resolved_)
    if (k == key) return !v.empty();
  return false;
}

const std::string& ExperimentConfig::text(const std::string& key) const {
  for (const auto& [k, v] : resolved_)
    if (k == key) return v;
  fail(ErrorCode::invalid_argument, "unknown configuration key " + key);
}

std::uint64_t ExperimentConfig::u64(const std::string& key) const {
  std::uint64_t v = 0;
  if (!parse_u64(text(key), v)) fail(ErrorCode::invalid_argument, key + " is not set");
  return v;
}

double ExperimentConfig::real(const std::string& key) const {
  double v = 0;
  if (!parse_real(text(key), v)) fail(ErrorCode::invalid_argument, key + " is not set");
  return v;
}

std::vector<std::uint64_t> ExperimentConfig::u64s(const std::string& key) const {
  return as_u64s(text(key));
}

std::vector<double> ExperimentConfig::reals(const std::string& key) const {
  return as_reals(text(key));
}

//---------------------------------------------------------------------------//
struct ConfigBuilder {
  static Validation build(const boost::property_tree::ptree& tree, const std::string& cli_command,
                          const Overrides& ov);
};

Validation ConfigBuilder::build(const boost::property_tree::ptree& tree,
                                const std::string& cli_command, const Overrides& ov) {
  Validation out;
  auto& errors = out.errors;
  static const std::map<std::string, std::set<std::string>> fixed = {
      {"experiment", {"command", "seed", "replicas", "allow_inadmissible"}},
      {"walk", {"support", "probs"}},
      {"scenery", {"support", "probs"}},
  };

  std::map<std::string, std::map<std::string, std::string>> raw;
  for (const auto& [sec, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      errors.push_back("key '" + sec + "' outside a section");
      continue;
    }
    for (const auto& [key, v] : body) {
      if (!v.empty()) errors.push_back(sec + "." + key + ": nested keys are not supported");
      raw[sec][key] = v.data();
    }
  }

  auto get = [&](const std::string& sec, const std::string& key) -> std::optional<std::string> {
    auto s = raw.find(sec);
    if (s == raw.end()) return std::nullopt;
    auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
  };

  std::string command = cli_command;
  if (auto c = get("experiment", "command")) {
    const auto file_cmd = boost::algorithm::trim_copy(*c);
    if (command.empty()) command = file_cmd;
    else if (file_cmd != command)
      errors.push_back("experiment.command: file names '" + file_cmd + "' but '" + command +
                       "' was requested");
  }
  const Schema* schema = find_schema(command);
  if (command.empty()) errors.push_back("experiment.command: no subcommand given");
  else if (!schema) errors.push_back("experiment.command: unknown subcommand '" + command + "'");

  // Strict key checking.
  for (const auto& [sec, keys] : raw) {
    std::set<std::string> allowed;
    if (auto f = fixed.find(sec); f != fixed.end()) allowed = f->second;
    else if (sec == "params") {
      if (schema)
        for (const auto& fld : schema->params) allowed.insert(fld.key);
    } else if (sec == "tuning") {
      for (const auto& fld : tuning_fields()) allowed.insert(fld.key);
    } else {
      errors.push_back("unknown section [" + sec + "]");
      continue;
    }
    for (const auto& [key, v] : keys)
      if (!allowed.count(key)) errors.push_back("unknown key " + sec + "." + key);
  }

  ExperimentConfig cfg;
  cfg.command_ = command;
  auto& res = cfg.resolved_;

  // [experiment]
  if (auto s = get("experiment", "seed")) {
    std::uint64_t v;
    if (parse_u64(*s, v)) cfg.seed_ = v;
    else errors.push_back("experiment.seed: expected a nonnegative integer");
  }
  if (ov.seed) cfg.seed_ = *ov.seed;
  cfg.replicas_ = schema ? schema->replicas : 1;
  if (auto s = get("experiment", "replicas")) {
    std::uint64_t v;
    if (parse_u64(*s, v)) cfg.replicas_ = v;
    else errors.push_back("experiment.replicas: expected a nonnegative integer");
  }
  if (ov.replicas) cfg.replicas_ = *ov.replicas;
  if (cfg.replicas_ == 0) errors.push_back("experiment.replicas: must be positive");
  if (auto s = get("experiment", "allow_inadmissible")) {
    const auto t = boost::algorithm::to_lower_copy(boost::algorithm::trim_copy(*s));
    if (t == "true" || t == "1") cfg.allow_inadmissible_ = true;
    else if (t != "false" && t != "0")
      errors.push_back("experiment.allow_inadmissible: expected true or false");
  }
  cfg.allow_inadmissible_ = cfg.allow_inadmissible_ || ov.allow_inadmissible;
  res.emplace_back("experiment.command", command);
  res.emplace_back("experiment.seed", std::to_string(cfg.seed_));
  res.emplace_back("experiment.replicas", std::to_string(cfg.replicas_));
  res.emplace_back("experiment.allow_inadmissible", cfg.allow_inadmissible_ ? "true" : "false");

  // Laws.  Both default to the simple walk and Rademacher scenery.
  for (const char* sec : {"walk", "scenery"}) {
    const auto sup = get(sec, "support").value_or("-1, 1");
    const auto pr = get(sec, "probs").value_or("1/2, 1/2");
    if (get(sec, "support").has_value() != get(sec, "probs").has_value())
      errors.push_back(std::string(sec) + ": support and probs must be given together");
    auto pmf = parse_pmf(sec, sup, pr, errors);
    std::string e;
    res.emplace_back(std::string(sec) + ".support", canonical(Kind::text, sup, e).value_or(sup));
    res.emplace_back(std::string(sec) + ".probs", canonical(Kind::text, pr, e).value_or(pr));
    if (!pmf) continue;
    try {
      if (std::string(sec) == "walk") {
        cfg.step_.emplace(*pmf);
      } else {
        cfg.scen_.emplace(*pmf);
      }
    } catch (const Error& ex) {
      errors.push_back(std::string(sec) + ": " + ex.what());
    }
  }

  // [params] and [tuning]
  bool typed = true;
  auto resolve = [&](const std::string& sec, const std::vector<Field>& fields) {
    for (const auto& f : fields) {
      const std::string name = sec + "." + f.key;
      auto v = get(sec, f.key);
      if (!v) {
        if (f.def == nullptr) {
          errors.push_back(name + ": required key is missing");
          typed = false;
        }
        v = f.def ? std::string(f.def) : std::string();
      }
      std::string err;
      std::string value;
      if (!boost::algorithm::trim_copy(*v).empty()) {
        auto c = canonical(f.kind, *v, err);
        if (!c) {
          errors.push_back(name + ": " + err);
          typed = false;
        } else {
          value = *c;
        }
      } else if (get(sec, f.key)) {
        errors.push_back(name + ": empty value");
        typed = false;
      }
      res.emplace_back(name, value);
    }
  };
  if (schema) resolve("params", schema->params);
  resolve("tuning", tuning_fields());

  // Derived constants.
  if (cfg.scen_) {
    const auto& c = cfg.scen_->constants();
    res.emplace_back("derived.sigma2", fmt_real(c.sigma2));
    res.emplace_back("derived.d", std::to_string(c.d));
    res.emplace_back("derived.d0", std::to_string(c.d0));
  }
  if (cfg.step_) res.emplace_back("derived.walk_variance", fmt_real(cfg.step_->pmf().variance()));

  if (schema && typed && cfg.step_ && cfg.scen_) {
    // Cross-field constraints, on the now well-typed values.
    const auto d0 = static_cast<std::uint64_t>(cfg.scen_->d0());
    auto need = [&](bool ok, const std::string& msg) {
      if (!ok) errors.push_back(msg);
    };
    auto positive_list = [&](const std::string& key) {
      const auto v = cfg.reals(key);
      need(!v.empty() && strictly_increasing(v) && v.front() > 0.0,
           key + ": must be a nonempty strictly increasing list of positive values");
    };
    auto fineness = [&](const std::string& key) {
      need(cfg.u64(key) >= 1000, key + ": fineness must be at least 1000");
    };
    auto prob = [&](const std::string& key, double lo, double hi) {
      const double v = cfg.real(key);
      need(v > lo && v < hi, key + ": must lie in (" + fmt_real(lo) + ", " + fmt_real(hi) + ")");
    };
    prob("tuning.gamma", 0.0, 0.25);
    prob("tuning.theta", 0.0, 1.0);
    const std::string cmd = command;
    if (cmd == "return-curve" || cmd == "oracle") {
      const auto n = cfg.u64s("params.n");
      need(!n.empty() && strictly_increasing(n) && n.front() > 0,
           "params.n: must be a nonempty strictly increasing list of positive integers");
      positive_list("params.ratios");
      const auto r = cfg.reals("params.ratios");
      if (!r.empty()) need(r.front() == 1.0, "params.ratios: the first ratio must be 1");
      if (!cfg.allow_inadmissible_ && d0 > 1)
        for (auto x : n)
          need(x % d0 == 0, "params.n: n = " + std::to_string(x) + " is not a multiple of d0 = " +
                                std::to_string(d0) + " (return probability vanishes off d0 Z)");
      if (cmd == "return-curve") {
        const auto& e = cfg.text("params.estimator");
        need(e == "conditional" || e == "indicator",
             "params.estimator: must be 'conditional' or 'indicator'");
        fineness("params.fineness");
        if (cfg.u64("params.constant_replicas") > 0)
          need(r.size() == 1, "params.constant_replicas: the constant check needs ratios = 1");
        if (cfg.has("params.shadow_budget")) {
          need(cfg.real("params.shadow_budget") > 0, "params.shadow_budget: must be positive");
          need(cfg.u64("params.shadow_per_axis") >= 2, "params.shadow_per_axis: at least 2");
          need(cfg.has("params.shadow_n"), "params.shadow_n: required with shadow_budget");
        }
      } else {
        for (auto x : n) {
          const double tmax = static_cast<double>(x) * r.back();
          need(tmax <= 24, "params.n: n * max ratio = " + fmt_real(tmax) +
                               " exceeds the enumeration budget of 24 steps");
        }
        need(cfg.u64("params.odd_max") <= 23, "params.odd_max: at most 23");
      }
    } else if (cmd == "counting-moments") {
      const auto k = cfg.u64("params.k");
      need(k >= 1 && k <= 3, "params.k: must be 1, 2 or 3");
      const auto n = cfg.u64s("params.n");
      need(n.size() >= 3 && strictly_increasing(n) && n.front() > 0,
           "params.n: at least 3 strictly increasing positive integers");
      fineness("params.fineness");
    } else if (cmd == "gram") {
      positive_list("params.T");
      fineness("params.fineness");
      need(cfg.u64("params.n") >= 16, "params.n: must be at least 16");
      need(cfg.real("params.threshold") > 0, "params.threshold: must be positive");
    } else if (cmd == "estimate-c") {
      fineness("params.fineness");
      const auto sets = split_list(cfg.text("params.T_sets"), ';');
      for (const auto& s : sets) {
        const auto v = as_reals(s);
        std::string e;
        need(canonical(Kind::real_list, s, e).has_value() && !v.empty() &&
                 strictly_increasing(v) && v.front() > 0.0 && v.size() <= 8,
             "params.T_sets: '" + s + "' must be 1..8 strictly increasing positive times");
      }
      need(cfg.real("params.band_factor") >= 1, "params.band_factor: must be at least 1");
    } else if (cmd == "besq-check") {
      need(cfg.real("params.y") > 0 && cfg.real("params.dt") > 0 && cfg.real("params.hit_y") > 0,
           "params.y, params.dt, params.hit_y: must be positive");
      need(cfg.u64("params.bins") >= 2, "params.bins: at least 2");
      need(cfg.u64("params.hit_samples") >= 100, "params.hit_samples: at least 100");
    } else if (cmd == "ray-knight") {
      fineness("params.fineness");
      need(cfg.real("params.level") > 0, "params.level: must be positive");
      need(cfg.real("params.offset") > 0, "params.offset: must be positive");
    } else if (cmd == "delta-localtime") {
      fineness("params.fineness");
      for (const char* k : {"params.eps", "params.holder_eps", "params.moment_eps", "params.dt",
                            "params.holder_dt"})
        need(cfg.real(k) > 0, std::string(k) + ": must be positive");
      const double m = static_cast<double>(cfg.u64("params.fineness"));
      need(cfg.real("params.dt") * m >= 1 && cfg.real("params.holder_dt") * m >= 1,
           "params.dt, params.holder_dt: dt * fineness must be at least 1");
      need(cfg.real("params.holder_dt") <= 0.00390625,
           "params.holder_dt: must resolve the finest lag 2^-8");
    } else if (cmd == "scaling-test") {
      positive_list("params.T");
      need(cfg.real("params.eps") > 0, "params.eps: must be positive");
      fineness("params.fineness");
      need(cfg.real("params.dt") * static_cast<double>(cfg.u64("params.fineness")) >= 1,
           "params.dt: dt * fineness must be at least 1");
    } else if (cmd == "correlation-ratio") {
      const auto n = cfg.u64("params.n");
      const double t = cfg.real("params.t");
      need(t > 0, "params.t: must be positive");
      need(n >= 4 && n % d0 == 0, "params.n: must be a positive multiple of d0 = " +
                                      std::to_string(d0));
      fineness("params.fineness");
    } else if (cmd == "boxcount") {
      const auto& p = cfg.text("params.process");
      need(p == "delta" || p == "brownian", "params.process: must be 'delta' or 'brownian'");
      const auto lo = cfg.u64("params.scale_lo"), hi = cfg.u64("params.scale_hi");
      need(hi >= lo + 7, "params.scale_lo, params.scale_hi: scales must span at least 2 decades");
      need(hi >= lo + 3, "params.scale_hi: at least 4 scales");
      const double dt = cfg.real("params.dt");
      need(dt > 0 && std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(hi, 60))) >= dt,
           "params.dt: finest scale 2^-scale_hi must be at least dt");
      fineness("params.fineness");
      need(dt * static_cast<double>(cfg.u64("params.fineness")) >= 1,
           "params.dt: dt * fineness must be at least 1");
    }
  }

  if (errors.empty()) out.config = std::move(cfg);
  return out;
}

Validation validate_config_text(const std::string& ini, const std::string& command,
                                const Overrides& overrides) {
  boost::property_tree::ptree tree;
  std::istringstream in(ini);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    Validation v;
    v.errors.push_back("parse error at line " + std::to_string(e.line()) + ": " + e.message());
    return v;
  }
  return ConfigBuilder::build(tree, command, overrides);
}

Validation validate_config(const std::filesystem::path& path, const std::string& command,
                           const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) {
    Validation v;
    v.errors.push_back("cannot read configuration file " + path.string());
    return v;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return validate_config_text(buf.str(), command, overrides);
}

std::string echo_config(const ExperimentConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const auto& [key, value] : config.resolved()) {
    const auto dot = key.find('.');
    const auto sec = key.substr(0, dot);
    if (sec != section) {
      out << (section.empty() ? "" : "\n") << "[" << sec << "]\n";
      section = sec;
    }
    if (!value.empty()) out << key.substr(dot + 1) << " = " << value << "\n";
  }
  return out.str();
}

}  // namespace rwrs::app
