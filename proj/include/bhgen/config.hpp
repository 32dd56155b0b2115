#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bhgen/engine.hpp"

namespace bhgen {

/// A reproducible run: process, observation grid, ensemble size and seed.
///
/// Parsed from JSON with a mandatory "version": 1 field. Unknown keys are
/// rejected at every level. Probabilities may be written as numbers or as
/// exact fractions such as "5/6".
struct RunConfig {
  static constexpr int current_version = 1;

  ProcessSpec process;
  std::vector<double> observation_times;
  std::uint64_t replicates = 1;
  std::uint64_t master_seed = 0;
  std::vector<double> p_sweep;
  std::string outputs = "bhgen-out";
  std::optional<double> oracle_dt;
  std::optional<double> oracle_t_max;

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::filesystem::path& path);

  nlohmann::json to_json() const;

  /// Label-loss probabilities to run: p_sweep if given, else {p_label_loss}.
  std::vector<double> label_probabilities() const;
};

nlohmann::json lifetime_to_json(const LifetimeDistribution& d);
LifetimeDistribution lifetime_from_json(const nlohmann::json& j);
nlohmann::json offspring_to_json(const OffspringDistribution& d);
OffspringDistribution offspring_from_json(const nlohmann::json& j);
nlohmann::json process_to_json(const ProcessSpec& spec);
ProcessSpec process_from_json(const nlohmann::json& j);

/// A probability written as a number or as a "num/den" string.
double parse_probability(const nlohmann::json& j);

}  // namespace bhgen
