// Copyright 2026 rwrs-lab contributors
// SPDX-License-Identifier: Apache-2.0

#include "rwrs/rwrs.h"

#include <cstring>
#include <exception>
#include <string>

#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/result.hpp"
#include "exact_oracle/oracle.hpp"
#include "simkit/error.hpp"
#include "simkit/manifest.hpp"

struct rwrs_law {
  rwrs::lattice::Pmf pmf;
};

struct rwrs_config {
  rwrs::app::ExperimentConfig config;
  std::string echo;
};

struct rwrs_result {
  rwrs::app::RunResult result;
  std::string csv;
  std::string json;
};

namespace {

thread_local std::string last_error;

rwrs_status ok() {
  last_error.clear();
  return RWRS_OK;
}

rwrs_status set_error(rwrs_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

// Maps an in-flight exception to a status.
rwrs_status from_exception() {
  try {
    throw;
  } catch (const rwrs::Error& e) {
    return set_error(static_cast<rwrs_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(RWRS_RESOURCE_LIMIT, "out of memory");
  } catch (const std::exception& e) {
    return set_error(RWRS_INTERNAL, e.what());
  } catch (...) {
    return set_error(RWRS_INTERNAL, "unknown exception");
  }
}

template <class F>
rwrs_status guarded(F&& f) {
  try {
    return f();
  } catch (...) {
    return from_exception();
  }
}

rwrs::app::Overrides to_overrides(const rwrs_overrides* o) {
  rwrs::app::Overrides out;
  if (!o) return out;
  if (o->has_seed) out.seed = o->seed;
  if (o->has_replicas) out.replicas = o->replicas;
  out.allow_inadmissible = o->allow_inadmissible != 0;
  return out;
}

rwrs_status finish_config(rwrs::app::Validation v, rwrs_config** out) {
  if (!v.ok()) {
    std::string msg;
    for (const auto& e : v.errors) msg += (msg.empty() ? "" : "\n") + e;
    return set_error(RWRS_VALIDATION_FAILED, msg);
  }
  auto* c = new rwrs_config{std::move(*v.config), {}};
  c->echo = rwrs::app::echo_config(c->config);
  *out = c;
  return ok();
}

rwrs_result* wrap(rwrs::app::RunResult r) {
  auto* h = new rwrs_result{std::move(r), {}, {}};
  h->csv = rwrs::app::to_csv(h->result.table);
  h->json = rwrs::app::to_json_text(h->result);
  return h;
}

}  // namespace

extern "C" {

const char* rwrs_version(void) {
  static const std::string v = rwrs::simkit::artifact_version();
  return v.c_str();
}

const char* rwrs_status_name(rwrs_status status) {
  if (status == RWRS_OK) return "ok";
  if (status == RWRS_VALIDATION_FAILED) return "validation-failed";
  return rwrs::to_string(static_cast<rwrs::ErrorCode>(status));
}

const char* rwrs_last_error(void) { return last_error.c_str(); }

rwrs_status rwrs_law_create(const int64_t* support, const int64_t* num, const int64_t* den,
                            size_t count, rwrs_law** out) {
  if (!out || (count && (!support || !num || !den)))
    return set_error(RWRS_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::vector<std::int64_t> s(support, support + count);
    std::vector<rwrs::lattice::Ratio> p;
    for (size_t i = 0; i < count; ++i) p.push_back({num[i], den[i]});
    *out = new rwrs_law{rwrs::lattice::Pmf(std::move(s), std::move(p))};
    return ok();
  });
}

rwrs_status rwrs_law_create_real(const int64_t* support, const double* probs, size_t count,
                                 rwrs_law** out) {
  if (!out || (count && (!support || !probs)))
    return set_error(RWRS_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new rwrs_law{rwrs::lattice::Pmf(std::vector<std::int64_t>(support, support + count),
                                           std::vector<double>(probs, probs + count))};
    return ok();
  });
}

void rwrs_law_destroy(rwrs_law* law) { delete law; }

rwrs_status rwrs_law_analyze(const rwrs_law* law, rwrs_law_constants* out) {
  if (!law || !out) return set_error(RWRS_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto c = rwrs::scenery::analyze_law(law->pmf);
    *out = {c.sigma2, c.d, c.d0, c.residue};
    return ok();
  });
}

rwrs_status rwrs_exact_joint_return(const rwrs_law* step, const rwrs_law* scenery,
                                    const uint64_t* times, size_t k, double* value,
                                    char* exact_fraction, size_t cap) {
  if (!step || !scenery || !times || !value)
    return set_error(RWRS_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const rwrs::lattice::StepLaw s(step->pmf);
    const rwrs::scenery::SceneryLaw z(scenery->pmf);
    const auto r = rwrs::oracle::exact_joint_return(
        s, z, std::span<const std::uint64_t>(times, k));
    *value = r.value;
    if (exact_fraction && cap) {
      std::strncpy(exact_fraction, r.exact.c_str(), cap - 1);
      exact_fraction[cap - 1] = '\0';
    }
    return ok();
  });
}

rwrs_status rwrs_config_parse_file(const char* path, const char* command,
                                   const rwrs_overrides* overrides, rwrs_config** out) {
  if (!path || !out) return set_error(RWRS_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    return finish_config(rwrs::app::validate_config(path, command ? command : "",
                                                    to_overrides(overrides)),
                         out);
  });
}

rwrs_status rwrs_config_parse_text(const char* text, const char* command,
                                   const rwrs_overrides* overrides, rwrs_config** out) {
  if (!text || !out) return set_error(RWRS_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    return finish_config(rwrs::app::validate_config_text(text, command ? command : "",
                                                         to_overrides(overrides)),
                         out);
  });
}

void rwrs_config_destroy(rwrs_config* config) { delete config; }

const char* rwrs_config_command(const rwrs_config* config) {
  return config ? config->config.command().c_str() : nullptr;
}

uint64_t rwrs_config_seed(const rwrs_config* config) { return config ? config->config.seed() : 0; }

const char* rwrs_config_echo(const rwrs_config* config) {
  return config ? config->echo.c_str() : nullptr;
}

const char* rwrs_subcommand(size_t index) {
  const auto& names = rwrs::app::subcommands();
  return index < names.size() ? names[index].c_str() : nullptr;
}

rwrs_status rwrs_run(const rwrs_config* config, rwrs_result** out) {
  if (!config || !out) return set_error(RWRS_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = wrap(rwrs::app::run_command(config->config));
    return ok();
  });
}

void rwrs_result_destroy(rwrs_result* result) { delete result; }

int rwrs_result_passed(const rwrs_result* result) {
  return result && result->result.passed() ? 1 : 0;
}

size_t rwrs_result_rows(const rwrs_result* result) {
  return result ? result->result.table.rows.size() : 0;
}

size_t rwrs_result_tests(const rwrs_result* result) {
  return result ? result->result.tests.size() : 0;
}

const char* rwrs_result_csv(const rwrs_result* result) {
  return result ? result->csv.c_str() : nullptr;
}

const char* rwrs_result_json(const rwrs_result* result) {
  return result ? result->json.c_str() : nullptr;
}

rwrs_status rwrs_result_from_json(const char* text, rwrs_result** out) {
  if (!text || !out) return set_error(RWRS_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = wrap(rwrs::app::result_from_json_text(text));
    return ok();
  });
}

int rwrs_result_equal(const rwrs_result* a, const rwrs_result* b) {
  return a && b && a->result == b->result ? 1 : 0;
}

rwrs_status rwrs_result_write(const rwrs_result* result, const rwrs_config* config,
                              const char* dir, double duration_seconds) {
  if (!result || !config || !dir) return set_error(RWRS_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    rwrs::app::write_outputs(dir, result->result, config->config.resolved(),
                             config->config.seed(), duration_seconds);
    return ok();
  });
}

}  // extern "C"
