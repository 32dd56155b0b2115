#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bhgen/distributions.hpp"
#include "bhgen/rng.hpp"

namespace bhgen {

struct InitialCells {
  int type = 1;
  std::uint64_t count = 1;
  bool labeled = true;
};

/// Parameterisation of a single- or two-type Bellman-Harris process with a
/// heritable label lost with probability p at each division.
struct ProcessSpec {
  static constexpr std::uint64_t default_population_cap = 10'000'000;

  int n_types = 1;
  std::vector<LifetimeDistribution> lifetime;  ///< one per type
  std::optional<OffspringDistribution> offspring_type1;
  std::optional<OffspringDistribution> offspring_type2;
  double p_label_loss = 0.0;
  std::vector<InitialCells> initial;
  std::uint64_t population_cap = default_population_cap;

  /// Throws Error(invalid_argument) on a malformed spec.
  void validate() const;

  /// Digest of everything that shapes the population dynamics. Label-loss
  /// probability, initial labels and the cap are excluded so that p-sweeps
  /// share one hash.
  std::string spec_hash() const;

  std::uint64_t initial_count(int type) const;
  bool has_lattice_lifetime() const;
};

/// Per-type observed state. G == GB - GD at all times.
struct TypeCounts {
  std::int64_t Z = 0;
  std::int64_t G = 0;
  std::int64_t Zpos = 0;
  std::int64_t GB = 0;
  std::int64_t GD = 0;

  friend bool operator==(const TypeCounts&, const TypeCounts&) = default;
};

struct Snapshot {
  double t = 0.0;
  std::array<TypeCounts, 2> counts{};
  /// Living-cell generations per type, filled only when retained.
  std::array<std::vector<std::uint32_t>, 2> generations{};
  bool has_generations = false;

  const TypeCounts& of(int cell_type) const { return counts.at(cell_type - 1); }
  std::int64_t total_living() const { return counts[0].Z + counts[1].Z; }

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

/// A cell of the recorded genealogy. Living cells carry their scheduled
/// death time.
struct Cell {
  std::uint64_t id = 0;
  std::int64_t parent = -1;
  int cell_type = 1;
  std::uint32_t generation = 0;
  bool labeled = true;
  double birth_time = 0.0;
  double death_time = 0.0;
  std::uint32_t n_children = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

struct Trajectory {
  std::string spec_hash;
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
  std::vector<Snapshot> snapshots;
  bool extinct = false;
  bool capped = false;
  /// Every cell ever born, ordered by id; empty unless recorded.
  std::vector<Cell> genealogy;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct SimulationOptions {
  bool retain_generations = false;
  bool record_genealogy = false;
};

/// Event-driven simulation up to the last observation time.
///
/// Divisions are processed in (death time, cell id) order; events at
/// exactly an observation time happen before the snapshot. The label
/// randomness uses a substream of `rng`, so the tree does not depend on p.
Trajectory simulate(const ProcessSpec& spec, const RngStream& rng,
                    std::span<const double> observation_times,
                    const SimulationOptions& options = {});

/// (1/Z) sum over living cells of (1-p)^generation: E(Zpos/Z | tree).
double expected_label_fraction(const Snapshot& snapshot, double p, int cell_type);

/// Re-samples the label process on a recorded genealogy (roots keep their
/// recorded label) and returns the number of labeled cells of `cell_type`
/// alive at time t.
std::int64_t redelabel_count(std::span<const Cell> genealogy, double p, double t,
                             int cell_type, RngStream& rng);

}  // namespace bhgen
