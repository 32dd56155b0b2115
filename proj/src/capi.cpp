#include "bhgen/bhgen.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "bhgen/commands.hpp"
#include "bhgen/config.hpp"
#include "bhgen/engine.hpp"
#include "bhgen/error.hpp"
#include "bhgen/estimator.hpp"
#include "bhgen/stats.hpp"

struct bhg_config {
  bhgen::RunConfig config;
};

struct bhg_trajectory {
  bhgen::Trajectory traj;
};

namespace {

thread_local std::string last_error;

bhg_status status_of(bhgen::ErrorCode code) {
  switch (code) {
    case bhgen::ErrorCode::invalid_argument: return BHG_INVALID_ARGUMENT;
    case bhgen::ErrorCode::config: return BHG_CONFIG;
    case bhgen::ErrorCode::io: return BHG_IO;
    case bhgen::ErrorCode::quadrature_nonconvergence: return BHG_QUADRATURE_NONCONVERGENCE;
    case bhgen::ErrorCode::bracket_failure: return BHG_BRACKET_FAILURE;
    case bhgen::ErrorCode::defective_denominator: return BHG_DEFECTIVE_DENOMINATOR;
    case bhgen::ErrorCode::empty_population: return BHG_EMPTY_POPULATION;
    case bhgen::ErrorCode::instability: return BHG_INSTABILITY;
    case bhgen::ErrorCode::mismatched_spec: return BHG_MISMATCHED_SPEC;
    case bhgen::ErrorCode::empty_input: return BHG_EMPTY_INPUT;
    case bhgen::ErrorCode::degenerate_variance: return BHG_DEGENERATE_VARIANCE;
  }
  return BHG_INTERNAL;
}

bhg_status fail(bhg_status s, const char* what) {
  last_error = what;
  return s;
}

template <class F>
bhg_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const bhgen::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(BHG_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BHG_INTERNAL, e.what());
  } catch (...) {
    return fail(BHG_INTERNAL, "unknown exception");
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define BHG_REQUIRE(cond, msg) \
  if (!(cond)) return fail(BHG_INVALID_ARGUMENT, msg)

}  // namespace

extern "C" {

const char* bhg_last_error_message(void) { return last_error.c_str(); }

const char* bhg_status_name(bhg_status status) {
  switch (status) {
    case BHG_OK: return "ok";
    case BHG_VERIFY_FAILED: return "verify-failed";
    case BHG_INTERNAL: return "internal";
    default: break;
  }
  if (status >= BHG_INVALID_ARGUMENT && status <= BHG_DEGENERATE_VARIANCE) {
    return bhgen::to_string(static_cast<bhgen::ErrorCode>(status));
  }
  return "unknown";
}

bhg_status bhg_config_load_file(const char* path, bhg_config** out) {
  BHG_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new bhg_config{bhgen::RunConfig::load(path)};
    return BHG_OK;
  });
}

bhg_status bhg_config_load_string(const char* json, bhg_config** out) {
  BHG_REQUIRE(json && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new bhg_config{bhgen::RunConfig::parse(json)};
    return BHG_OK;
  });
}

void bhg_config_destroy(bhg_config* config) { delete config; }

const char* bhg_config_outputs(const bhg_config* config) {
  return config ? config->config.outputs.c_str() : nullptr;
}

void bhg_string_free(char* s) { delete[] s; }

bhg_status bhg_malthus_report(const bhg_config* config, char** report) {
  BHG_REQUIRE(config && report, "null argument");
  *report = nullptr;
  return guarded([&] {
    *report = dup_string(bhgen::cmd_malthus(config->config));
    return BHG_OK;
  });
}

bhg_status bhg_run_ensemble(const bhg_config* config, const char* out_dir, unsigned jobs) {
  BHG_REQUIRE(config && out_dir, "null argument");
  return guarded([&] {
    bhgen::cmd_ensemble(config->config, out_dir, jobs == 0 ? 1 : jobs);
    return BHG_OK;
  });
}

bhg_status bhg_run_oracle(const bhg_config* config, const char* out_csv, double dt) {
  BHG_REQUIRE(config && out_csv, "null argument");
  return guarded([&] {
    std::optional<double> step;
    if (dt > 0.0) step = dt;
    bhgen::cmd_oracle(config->config, out_csv, step);
    return BHG_OK;
  });
}

bhg_status bhg_run_verify(const char* ensemble_dir, const char* oracle_csv,
                          const char* verdict_path, char** verdict_json) {
  BHG_REQUIRE(ensemble_dir && oracle_csv && verdict_path, "null argument");
  if (verdict_json) *verdict_json = nullptr;
  return guarded([&] {
    const bhgen::Verdict v = bhgen::cmd_verify(ensemble_dir, oracle_csv, verdict_path);
    if (verdict_json) *verdict_json = dup_string(v.to_json());
    if (!v.all_pass()) {
      last_error = "one or more criteria failed";
      return BHG_VERIFY_FAILED;
    }
    return BHG_OK;
  });
}

bhg_status bhg_run_figures(const char* out_dir, double scale, uint64_t master_seed, unsigned jobs) {
  BHG_REQUIRE(out_dir, "null argument");
  BHG_REQUIRE(scale > 0.0, "scale must be positive");
  return guarded([&] {
    bhgen::cmd_figures(out_dir, {scale, master_seed, jobs == 0 ? 1 : jobs});
    return BHG_OK;
  });
}

bhg_status bhg_simulate(const bhg_config* config, uint64_t stream_index, bhg_trajectory** out) {
  BHG_REQUIRE(config && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    const auto& c = config->config;
    c.process.validate();
    const bhgen::RngStream rng(c.master_seed, stream_index);
    *out = new bhg_trajectory{bhgen::simulate(c.process, rng, c.observation_times)};
    return BHG_OK;
  });
}

void bhg_trajectory_destroy(bhg_trajectory* traj) { delete traj; }

size_t bhg_trajectory_size(const bhg_trajectory* traj) {
  return traj ? traj->traj.snapshots.size() : 0;
}

int bhg_trajectory_extinct(const bhg_trajectory* traj) {
  return traj && traj->traj.extinct ? 1 : 0;
}

bhg_status bhg_trajectory_counts(const bhg_trajectory* traj, size_t index, int cell_type,
                                 double* t, int64_t* z, int64_t* g, int64_t* zpos) {
  BHG_REQUIRE(traj, "null trajectory");
  BHG_REQUIRE(index < traj->traj.snapshots.size(), "snapshot index out of range");
  BHG_REQUIRE(cell_type == 1 || cell_type == 2, "cell type must be 1 or 2");
  const auto& s = traj->traj.snapshots[index];
  const auto& c = s.of(cell_type);
  if (t) *t = s.t;
  if (z) *z = c.Z;
  if (g) *g = c.G;
  if (zpos) *zpos = c.Zpos;
  return BHG_OK;
}

bhg_status bhg_constants_json(const bhg_config* config, char** json) {
  BHG_REQUIRE(config && json, "null argument");
  *json = nullptr;
  return guarded([&] {
    const auto consts = bhgen::ProcessConstants::calibrate(config->config.process);
    *json = dup_string(bhgen::constants_to_json(consts).dump());
    return BHG_OK;
  });
}

bhg_status bhg_ks_two_sample(const double* a, size_t na, const double* b, size_t nb, double* out) {
  BHG_REQUIRE(out && (a || na == 0) && (b || nb == 0), "null argument");
  return guarded([&] {
    *out = bhgen::ks_two_sample({a, na}, {b, nb});
    return BHG_OK;
  });
}

bhg_status bhg_pearson(const double* a, const double* b, size_t n, double* out) {
  BHG_REQUIRE(out && ((a && b) || n == 0), "null argument");
  return guarded([&] {
    *out = bhgen::pearson({a, n}, {b, n});
    return BHG_OK;
  });
}

bhg_status bhg_label_estimate(int64_t z, int64_t zpos, double p, double t, double* out,
                              int* defined) {
  BHG_REQUIRE(out && defined, "null argument");
  BHG_REQUIRE(z >= 0 && zpos >= 0 && zpos <= z, "counts must satisfy 0 <= zpos <= z");
  return guarded([&] {
    bhgen::TypeCounts c;
    c.Z = z;
    c.Zpos = zpos;
    const auto est = bhgen::label_estimate(c, p, t);
    *defined = est ? 1 : 0;
    *out = est.value_or(0.0);
    return BHG_OK;
  });
}

}  // extern "C"
