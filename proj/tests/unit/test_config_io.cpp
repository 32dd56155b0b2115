#include <sstream>
#include <string>

#include "doctest.h"

#include "bhgen/config.hpp"
#include "bhgen/error.hpp"
#include "bhgen/io.hpp"

using namespace bhgen;

namespace {

const char* minimal = R"({
  "version": 1,
  "process": {
    "lifetime": {"kind": "lognormal", "mean": 9.3, "sd": 2.54},
    "offspring_type1": {"support": [0, 2], "probs": ["1/5", "4/5"]},
    "p_label_loss": 0.01
  },
  "observation_times": {"t_max": 96, "n_points": 5},
  "replicates": 10,
  "master_seed": 3
})";

ErrorCode code_of(const std::string& text) {
  try {
    RunConfig::parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("config accepted");
  return ErrorCode::invalid_argument;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig c = RunConfig::parse(minimal);
  CHECK(c.observation_times == std::vector<double>{0, 24, 48, 72, 96});
  CHECK(c.replicates == 10);
  CHECK(c.process.offspring_type1->probs()[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(c.label_probabilities() == std::vector<double>{0.01});

  // round trip
  const RunConfig again = RunConfig::from_json(c.to_json());
  CHECK(again.process.spec_hash() == c.process.spec_hash());
  CHECK(again.observation_times == c.observation_times);
}

TEST_CASE("config rejects malformed input") {
  const std::string base = minimal;
  CHECK(code_of(replace(base, R"("version": 1)", R"("version": 2)")) == ErrorCode::config);
  CHECK(code_of(replace(base, R"("replicates": 10)", R"("replicates": 10, "extra": 1)")) == ErrorCode::config);
  CHECK(code_of(replace(base, R"("sd": 2.54)", R"("sd": 2.54, "shape": 1)")) == ErrorCode::config);
  CHECK(code_of(replace(base, R"("4/5")", R"("3/5")")) == ErrorCode::config);
  CHECK(code_of(replace(base, R"("replicates": 10)", R"("replicates": 0)")) == ErrorCode::config);
  CHECK(code_of(replace(base, R"("p_label_loss": 0.01)", R"("p_label_loss": 2)")) == ErrorCode::config);
  CHECK(code_of("{not json") == ErrorCode::config);
  CHECK_THROWS_AS(RunConfig::load("/nonexistent/config.json"), Error);
}

TEST_CASE("two-type config") {
  const RunConfig c = RunConfig::parse(R"({
    "version": 1,
    "process": {
      "n_types": 2,
      "lifetime": [{"kind": "exponential", "rate": 1}, {"kind": "gamma", "shape": 2, "scale": 0.5}],
      "offspring_type1": {"total": {"support": [2], "probs": [1]}, "p_type2": "1/6"},
      "offspring_type2": {"support": [0, 2], "probs": [0.4, 0.6]},
      "initial": [{"type": 1, "count": 100, "labeled": true}, {"type": 2, "count": 2, "labeled": false}]
    },
    "observation_times": [0, 1, 2],
    "p_sweep": [0.1, 0.01],
    "oracle": {"dt": 0.01, "t_max": 5}
  })");
  CHECK(c.process.n_types == 2);
  CHECK(c.process.offspring_type1->mean_type2() == doctest::Approx(1.0 / 3));
  CHECK(c.process.initial_count(1) == 100);
  CHECK(c.process.initial_count(2) == 2);
  CHECK(c.label_probabilities() == std::vector<double>{0.1, 0.01});
  CHECK(*c.oracle_dt == 0.01);
}

TEST_CASE("oracle csv round trip") {
  std::vector<MomentGrid> grids{{MomentId::EZ, 0.5, {1.0, 1.25, 1.5}}, {MomentId::EG, 0.5, {0.0, 0.1, 1.0 / 3.0}}};
  std::ostringstream out;
  write_oracle_csv(out, grids, "0123456789abcdef");
  std::istringstream in(out.str());
  const OracleFile f = read_oracle_csv(in);
  CHECK(f.spec_hash == "0123456789abcdef");
  REQUIRE(f.find(MomentId::EG));
  CHECK(f.find(MomentId::EG)->values == grids[1].values);
  CHECK(f.find(MomentId::EG)->at(0.75) == doctest::Approx(0.5 * (0.1 + 1.0 / 3.0)));
  CHECK(f.find(MomentId::EG2) == nullptr);
  CHECK(format_time(2.5) == "2.500000");
  CHECK(format_value(1.0 / 3.0) == "0.333333333333");
}
