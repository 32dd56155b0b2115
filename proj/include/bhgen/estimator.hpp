#pragma once

#include <optional>
#include <string>
#include <variant>

#include "bhgen/calibration.hpp"
#include "bhgen/engine.hpp"

namespace bhgen {

/// Calibrated constants bound to the process they were computed for.
struct ProcessConstants {
  std::string spec_hash;
  int n_types = 1;
  Constants single;         ///< n_types == 1
  TwoTypeConstants two;     ///< n_types == 2
  double initial_type1 = 1.0;
  double initial_type2 = 0.0;

  static ProcessConstants calibrate(const ProcessSpec& spec);

  bool lattice_warning() const {
    return n_types == 1 ? single.lattice_warning : two.lattice_warning;
  }
  /// Asymptotic slope of G/Z for `cell_type`.
  double generation_slope(int cell_type) const;
};

/// Estimator quantities for one type at one observation time. Undefined
/// values are empty optionals and never zeros.
struct EstimatorPoint {
  double t = 0.0;
  std::optional<double> avg_gen;
  std::optional<double> label_est;
  std::optional<double> w_z;
  std::optional<double> w_g;
};

/// G/Z, undefined when Z = 0.
std::optional<double> average_generation(const TypeCounts& counts);
std::optional<double> average_generation(const Snapshot& s, int cell_type);

/// -(1/(p t)) log(Zpos/Z). Zero whenever Zpos == Z > 0; undefined if Z = 0
/// or Zpos = 0. Needs p > 0 and t > 0 otherwise.
std::optional<double> label_estimate(const TypeCounts& counts, double p, double t);
std::optional<double> label_estimate(const Snapshot& s, double p, int cell_type);

/// -(1/(p t)) log(fraction) for a label-positive fraction in (0, 1].
double label_estimate_from_fraction(double fraction, double p, double t);

/// Normalised population and total generation:
///   single type   w_z = Z / (n0 c e^{alpha t}),  w_g = G / (n0 c h alpha' t e^{alpha t})
///   two types     type 1 uses (c1, d1, alpha1); type 2 uses (c12, d12, alpha2)
///                 when alpha1 < alpha2 and (c21, d21, alpha1) otherwise,
///                 each scaled by the initial type-1 count.
/// w_g is undefined at t = 0. Throws mismatched_spec on a hash mismatch.
EstimatorPoint normalized_point(const Snapshot& s, const std::string& snapshot_spec_hash,
                                const ProcessConstants& consts, int cell_type, double p);

}  // namespace bhgen
