#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bhgen/ensemble.hpp"
#include "bhgen/oracle.hpp"

namespace bhgen {

inline constexpr const char* trajectory_csv_header = "replicate,t,type,Z,G,Zpos,GB,GD,extinct,capped";
inline constexpr const char* estimator_csv_header = "replicate,t,type,avg_gen,label_est,w_z,w_g";
inline constexpr const char* oracle_csv_header = "t,moment_id,value";

/// One row per (replicate, observation time, type); times with 6 decimals.
void write_trajectory_csv(std::ostream& out, const EnsembleTable& table);
/// Undefined estimator values are written as empty fields.
void write_estimator_csv(std::ostream& out, const EnsembleTable& table);
void write_summary_csv(std::ostream& out, const EnsembleSummary& summary);

/// Parses a trajectory CSV (and optionally its estimator CSV) back into a
/// table. spec_hash, n_types and p come from the caller.
EnsembleTable read_ensemble_csv(std::istream& trajectories, std::istream* estimator,
                                int n_types);

/// Oracle CSV preceded by a "# spec_hash=<hex>" comment line.
void write_oracle_csv(std::ostream& out, const std::vector<MomentGrid>& grids,
                      const std::string& spec_hash);

struct OracleFile {
  std::string spec_hash;
  std::vector<MomentGrid> grids;

  const MomentGrid* find(MomentId id) const;
};

OracleFile read_oracle_csv(std::istream& in);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// Number formatting shared by all writers.
std::string format_time(double t);
std::string format_value(double v);

}  // namespace bhgen
