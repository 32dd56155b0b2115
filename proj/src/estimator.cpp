#include "bhgen/estimator.hpp"

#include <cmath>

#include <fmt/format.h>

#include "bhgen/error.hpp"

namespace bhgen {
namespace {

struct Scaling {
  double alpha;
  double c;  // population prefactor
  double d;  // total-generation prefactor
  double n0;
};

Scaling scaling_for(const ProcessConstants& k, int cell_type) {
  if (k.n_types == 1) {
    return {k.single.alpha, k.single.c, k.single.c * k.single.generation_slope(),
            k.initial_type1};
  }
  const auto& t = k.two;
  if (cell_type == 1) return {t.alpha1, t.c1, t.d1, k.initial_type1};
  if (k.initial_type1 <= 0.0) return {t.alpha2, t.c2, t.d2, k.initial_type2};
  if (t.ordering == MalthusOrdering::alpha1_less) {
    return {t.alpha2, t.c12, t.d12, k.initial_type1};
  }
  return {t.alpha1, t.c21_renewal, t.d21_renewal, k.initial_type1};
}

}  // namespace

ProcessConstants ProcessConstants::calibrate(const ProcessSpec& spec) {
  spec.validate();
  ProcessConstants k;
  k.spec_hash = spec.spec_hash();
  k.n_types = spec.n_types;
  k.initial_type1 = static_cast<double>(spec.initial_count(1));
  k.initial_type2 = static_cast<double>(spec.initial_count(2));
  if (spec.n_types == 1) {
    const auto& law = *spec.offspring_type1;
    k.single = single_type_constants(law.mean(), law.factorial_moment2(), spec.lifetime[0]);
  } else {
    const auto& law1 = *spec.offspring_type1;
    k.two = two_type_constants(law1.mean(), law1.mean_type2(), spec.offspring_type2->mean(),
                               spec.lifetime[0], spec.lifetime[1]);
  }
  return k;
}

double ProcessConstants::generation_slope(int cell_type) const {
  if (n_types == 1) return single.generation_slope();
  if (cell_type == 1) return two.h1 * two.alpha1_prime;
  if (initial_type1 <= 0.0) return two.mu * two.alpha2_prime;
  return two.type2_generation_slope();
}

std::optional<double> average_generation(const TypeCounts& counts) {
  if (counts.Z <= 0) return std::nullopt;
  return static_cast<double>(counts.G) / static_cast<double>(counts.Z);
}

std::optional<double> average_generation(const Snapshot& s, int cell_type) {
  return average_generation(s.of(cell_type));
}

std::optional<double> label_estimate(const TypeCounts& counts, double p, double t) {
  if (counts.Z <= 0 || counts.Zpos <= 0) return std::nullopt;
  if (counts.Zpos == counts.Z) return 0.0;
  if (!(p > 0.0) || !(t > 0.0)) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("label estimate needs p > 0 and t > 0 (p={}, t={})", p, t));
  }
  return label_estimate_from_fraction(
      static_cast<double>(counts.Zpos) / static_cast<double>(counts.Z), p, t);
}

std::optional<double> label_estimate(const Snapshot& s, double p, int cell_type) {
  return label_estimate(s.of(cell_type), p, s.t);
}

double label_estimate_from_fraction(double fraction, double p, double t) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("label-positive fraction must lie in (0,1], got {}", fraction));
  }
  if (fraction == 1.0) return 0.0;
  if (!(p > 0.0) || !(t > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "label estimate needs p > 0 and t > 0");
  }
  return -std::log(fraction) / (p * t);
}

EstimatorPoint normalized_point(const Snapshot& s, const std::string& snapshot_spec_hash,
                                const ProcessConstants& consts, int cell_type, double p) {
  if (snapshot_spec_hash != consts.spec_hash) {
    throw Error(ErrorCode::mismatched_spec,
                fmt::format("snapshot spec hash {} does not match constants hash {}",
                            snapshot_spec_hash, consts.spec_hash));
  }
  if (cell_type < 1 || cell_type > consts.n_types) {
    throw Error(ErrorCode::invalid_argument, fmt::format("no cell type {}", cell_type));
  }
  const TypeCounts& counts = s.of(cell_type);
  EstimatorPoint out;
  out.t = s.t;
  out.avg_gen = average_generation(counts);
  if (counts.Z > 0 && counts.Zpos > 0 && (counts.Zpos == counts.Z || (p > 0.0 && s.t > 0.0))) {
    out.label_est = label_estimate(counts, p, s.t);
  }
  const Scaling sc = scaling_for(consts, cell_type);
  if (sc.n0 > 0.0 && std::isfinite(sc.c) && sc.c > 0.0) {
    const double growth = sc.n0 * std::exp(sc.alpha * s.t);
    out.w_z = static_cast<double>(counts.Z) / (sc.c * growth);
    if (s.t > 0.0 && std::isfinite(sc.d) && sc.d > 0.0) {
      out.w_g = static_cast<double>(counts.G) / (sc.d * s.t * growth);
    }
  }
  return out;
}

}  // namespace bhgen
