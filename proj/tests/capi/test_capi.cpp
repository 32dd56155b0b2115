#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"

#include "bhgen/bhgen.h"

namespace fs = std::filesystem;

namespace {

const char* doubling_config = R"({
  "version": 1,
  "process": {
    "lifetime": {"kind": "deterministic", "value": 1.0},
    "offspring_type1": {"support": [2], "probs": [1]},
    "p_label_loss": 0
  },
  "observation_times": [0.5, 1.5, 2.5],
  "master_seed": 1
})";

const char* lognormal_config = R"({
  "version": 1,
  "process": {
    "lifetime": {"kind": "lognormal", "mean": 9.3, "sd": 2.54},
    "offspring_type1": {"support": [0, 2], "probs": ["1/5", "4/5"]},
    "p_label_loss": 0.01
  },
  "observation_times": {"t_max": 96, "n_points": 9},
  "replicates": 1000,
  "master_seed": 20190401
})";

struct Config {
  bhg_config* ptr = nullptr;
  explicit Config(const char* json) { REQUIRE(bhg_config_load_string(json, &ptr) == BHG_OK); }
  ~Config() { bhg_config_destroy(ptr); }
};

}  // namespace

TEST_CASE("config errors carry a status and message") {
  bhg_config* cfg = nullptr;
  CHECK(bhg_config_load_string("{\"version\": 3}", &cfg) == BHG_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(std::string(bhg_last_error_message()).size() > 0);
  CHECK(bhg_config_load_file("/nonexistent.json", &cfg) != BHG_OK);
  CHECK(bhg_config_load_string(nullptr, &cfg) == BHG_INVALID_ARGUMENT);
  CHECK(std::string(bhg_status_name(BHG_MISMATCHED_SPEC)) == "mismatched-spec");
  bhg_config_destroy(nullptr);
}

TEST_CASE("malthus report and constants") {
  Config c(doubling_config);
  char* text = nullptr;
  REQUIRE(bhg_malthus_report(c.ptr, &text) == BHG_OK);
  CHECK(std::string(text).find("warning: lattice") != std::string::npos);
  bhg_string_free(text);
  char* json = nullptr;
  REQUIRE(bhg_constants_json(c.ptr, &json) == BHG_OK);
  CHECK(std::string(json).find("\"alpha\":0.6931471805599") != std::string::npos);
  bhg_string_free(json);
}

TEST_CASE("trajectory access") {
  Config c(doubling_config);
  bhg_trajectory* tr = nullptr;
  REQUIRE(bhg_simulate(c.ptr, 0, &tr) == BHG_OK);
  CHECK(bhg_trajectory_size(tr) == 3);
  CHECK(bhg_trajectory_extinct(tr) == 0);
  double t = 0;
  int64_t z = 0, g = 0, zpos = 0;
  REQUIRE(bhg_trajectory_counts(tr, 2, 1, &t, &z, &g, &zpos) == BHG_OK);
  CHECK(t == 2.5);
  CHECK(z == 4);
  CHECK(g == 8);
  CHECK(zpos == 4);
  CHECK(bhg_trajectory_counts(tr, 3, 1, &t, &z, &g, &zpos) == BHG_INVALID_ARGUMENT);
  CHECK(bhg_trajectory_counts(tr, 0, 3, nullptr, nullptr, nullptr, nullptr) == BHG_INVALID_ARGUMENT);
  bhg_trajectory_destroy(tr);
}

TEST_CASE("statistics") {
  const double a[] = {0, 0}, b[] = {1, 1}, x[] = {1, 2, 3}, y[] = {5, 7, 9};
  double out = -1;
  REQUIRE(bhg_ks_two_sample(a, 2, b, 2, &out) == BHG_OK);
  CHECK(out == 1.0);
  CHECK(bhg_ks_two_sample(a, 0, b, 2, &out) == BHG_EMPTY_INPUT);
  REQUIRE(bhg_pearson(x, y, 3, &out) == BHG_OK);
  CHECK(out == doctest::Approx(1.0));
  CHECK(bhg_pearson(x, a, 2, &out) == BHG_DEGENERATE_VARIANCE);

  int defined = -1;
  REQUIRE(bhg_label_estimate(10, 10, 0.01, 5.0, &out, &defined) == BHG_OK);
  CHECK(defined == 1);
  CHECK(out == 0.0);
  REQUIRE(bhg_label_estimate(10, 0, 0.01, 5.0, &out, &defined) == BHG_OK);
  CHECK(defined == 0);
  REQUIRE(bhg_label_estimate(1000, 950, 0.01, 5.0, &out, &defined) == BHG_OK);
  CHECK(out == doctest::Approx(-std::log(0.95) / 0.05));
  CHECK(bhg_label_estimate(5, 6, 0.01, 5.0, &out, &defined) == BHG_INVALID_ARGUMENT);
}

TEST_CASE("ensemble, oracle and verify through the C API") {
  Config c(lognormal_config);
  const fs::path dir = fs::temp_directory_path() / "bhgen_capi";
  fs::remove_all(dir);
  REQUIRE(bhg_run_ensemble(c.ptr, dir.c_str(), 2) == BHG_OK);
  REQUIRE(bhg_run_oracle(c.ptr, (dir / "oracle.csv").c_str(), 0.0) == BHG_OK);
  char* verdict = nullptr;
  const bhg_status s = bhg_run_verify(dir.c_str(), (dir / "oracle.csv").c_str(),
                                      (dir / "verdict.json").c_str(), &verdict);
  REQUIRE(verdict != nullptr);
  CHECK(std::string(verdict).find("\"criteria\"") != std::string::npos);
  CHECK(s == BHG_OK);
  bhg_string_free(verdict);
  CHECK(bhg_run_oracle(c.ptr, (dir / "coarse.csv").c_str(), 5.0) == BHG_INSTABILITY);
  fs::remove_all(dir);
}
