#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bhgen/config.hpp"
#include "bhgen/estimator.hpp"

namespace bhgen {

/// Every calibrated constant; NaN entries become null.
nlohmann::json constants_to_json(const ProcessConstants& consts);

/// Flat key=value table of every calibrated constant, followed by a warning
/// line when a lifetime law is lattice.
std::string cmd_malthus(const RunConfig& config);

/// Runs the ensemble once per label-loss probability and writes
/// manifest.json plus trajectory, estimator and summary CSVs into out_dir.
/// Output bytes depend only on the config, never on `jobs`.
void cmd_ensemble(const RunConfig& config, const std::filesystem::path& out_dir, unsigned jobs);

/// Writes the moment grids for the config's process. dt defaults to the
/// config's oracle.dt, then to default_dt(); the horizon to oracle.t_max,
/// then to the last observation time.
void cmd_oracle(const RunConfig& config, const std::filesystem::path& out_csv,
                std::optional<double> dt = std::nullopt);

struct Criterion {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string comparison;  ///< "<=", ">=", "<"
  bool informational = false;
};

struct Verdict {
  std::string spec_hash;
  std::vector<Criterion> criteria;

  bool all_pass() const;
  std::string to_json() const;
};

/// Checks an ensemble directory against an oracle CSV and writes the verdict
/// file. Throws Error(mismatched_spec) when the hashes disagree.
Verdict cmd_verify(const std::filesystem::path& ensemble_dir,
                   const std::filesystem::path& oracle_csv,
                   const std::filesystem::path& verdict_path);

struct FigureOptions {
  double scale = 1.0;  ///< multiplies every replicate count
  std::uint64_t master_seed = 2019;
  unsigned jobs = 1;
};

/// Emits the CSV data behind each figure panel into out_dir.
std::vector<std::filesystem::path> cmd_figures(const std::filesystem::path& out_dir,
                                               const FigureOptions& options);

/// Built-in parameterisations used by `figures` and the acceptance suite.
namespace presets {
ProcessSpec lognormal_binary_split();           ///< lognormal(9.3, 2.54), {0: 1/5, 2: 4/5}
ProcessSpec two_type_alpha1_less(std::uint64_t initial_type1 = 1, double p = 0.01);
ProcessSpec two_type_alpha2_less(std::uint64_t initial_type1 = 1, double p = 0.01);
}  // namespace presets

}  // namespace bhgen
