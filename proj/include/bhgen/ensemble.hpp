#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bhgen/engine.hpp"
#include "bhgen/estimator.hpp"
#include "bhgen/stats.hpp"

namespace bhgen {

/// Runs `replicates` trajectories with stream_index = replicate index on
/// `jobs` worker threads. The result is ordered by replicate index and does
/// not depend on `jobs`.
std::vector<Trajectory> run_ensemble(const ProcessSpec& spec,
                                     std::span<const double> observation_times,
                                     std::uint64_t replicates, std::uint64_t master_seed,
                                     unsigned jobs, const SimulationOptions& options = {});

/// One replicate as it appears in the trajectory and estimator CSVs.
struct ReplicateRecord {
  std::uint64_t replicate = 0;
  bool extinct = false;
  bool capped = false;
  std::vector<Snapshot> snapshots;
  /// estimates[i][type-1] for snapshot i
  std::vector<std::array<EstimatorPoint, 2>> estimates;

  bool survives() const { return !snapshots.empty() && snapshots.back().total_living() > 0; }
};

/// Tabulated ensemble: the in-memory form of the CSV outputs.
struct EnsembleTable {
  std::string spec_hash;
  int n_types = 1;
  double p_label_loss = 0.0;
  std::vector<double> times;
  std::vector<ReplicateRecord> replicates;
};

EnsembleTable tabulate(std::span<const Trajectory> trajectories, const ProcessConstants& consts,
                       double p_label_loss, std::span<const double> times);

/// Recomputes every estimator point from the counts with `consts`.
void renormalize(EnsembleTable& table, const ProcessConstants& consts);

struct QuantityStat {
  double t = 0.0;
  int cell_type = 1;
  std::string quantity;
  bool survivors_only = false;
  MeanStderr stat;
};

struct TypeFinalStats {
  std::optional<double> ks_wz_wg;
  std::optional<double> pearson_wz_wg;
};

struct EnsembleSummary {
  std::size_t n_total = 0;
  std::size_t n_surviving = 0;
  std::size_t n_capped = 0;
  std::vector<QuantityStat> rows;
  std::array<TypeFinalStats, 2> final_stats{};
  std::optional<double> pearson_wz1_wz2;
  std::optional<double> pearson_wg1_wg2;

  const QuantityStat* find(double t, int cell_type, const std::string& quantity,
                           bool survivors_only) const;
};

/// Per-time, per-type means and standard errors of Z, G, w_z, w_g, avg_gen
/// and label_est (unconditional and conditioned on survival to the final
/// time), plus final-time KS distance and correlations among survivors.
/// Capped replicates are left out. Throws mismatched_spec on a hash mismatch.
EnsembleSummary summarize(const EnsembleTable& table, const ProcessConstants& consts);

/// Values of one estimator field for one type at snapshot `index`, over
/// non-capped replicates (survivors only if asked); undefined entries are skipped.
std::vector<double> column(const EnsembleTable& table, std::size_t index, int cell_type,
                           std::optional<double> EstimatorPoint::*field, bool survivors_only);

}  // namespace bhgen
