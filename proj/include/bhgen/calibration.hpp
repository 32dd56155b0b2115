#pragma once

#include <limits>

#include "bhgen/distributions.hpp"

namespace bhgen {

/// Growth constants of a single-type super-critical process.
struct Constants {
  double h = 0.0;
  double v = 0.0;
  double alpha = 0.0;        ///< Malthusian parameter, 1/hours
  double alpha_prime = 0.0;  ///< d alpha / d h at h
  double c = 0.0;            ///< lim E(Z(t)) e^{-alpha t}
  double k = 0.0;            ///< lim E(W_t^2)
  double var_limit = 0.0;    ///< k - 1
  bool lattice_warning = false;

  /// Asymptotic slope of the average generation, h * alpha'.
  double generation_slope() const noexcept { return h * alpha_prime; }
};

enum class MalthusOrdering { alpha1_less, alpha2_less };

/// Constants of the two-type process with one-way differentiation.
///
/// c12/d12 are only meaningful when alpha1 < alpha2 and c21/d21 when
/// alpha2 < alpha1; the other pair is NaN whenever its denominator is not
/// positive. c21/d21 follow the closed form as printed in the source
/// literature; c21_renewal/d21_renewal are the key-renewal-theorem limit of
/// E_1(Z2(t)) e^{-alpha1 t}, which is what the normalisations use.
struct TwoTypeConstants {
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  double h1 = 0.0, h2 = 0.0, mu = 0.0;
  double alpha1 = 0.0, alpha2 = 0.0;
  double alpha1_prime = 0.0, alpha2_prime = 0.0;
  double c1 = 0.0, c2 = 0.0, d1 = 0.0, d2 = 0.0;
  double c12 = nan, d12 = nan;
  double c21 = nan, d21 = nan;
  double c21_renewal = nan, d21_renewal = nan;
  MalthusOrdering ordering = MalthusOrdering::alpha1_less;
  bool lattice_warning = false;

  /// Asymptotic slope of the type-2 average generation.
  double type2_generation_slope() const noexcept {
    return ordering == MalthusOrdering::alpha1_less ? mu * alpha2_prime
                                                    : h1 * alpha1_prime;
  }
};

/// Unique positive root of h * E(exp(-alpha L)) = 1 by bisection.
double solve_malthus(double h, const LifetimeDistribution& lifetime);

Constants derived_constants(double h, double v, const LifetimeDistribution& lifetime,
                            double alpha);

/// solve_malthus followed by derived_constants.
Constants single_type_constants(double h, double v, const LifetimeDistribution& lifetime);

TwoTypeConstants two_type_constants(double h1, double h2, double mu,
                                    const LifetimeDistribution& lifetime1,
                                    const LifetimeDistribution& lifetime2);

const char* to_string(MalthusOrdering ordering) noexcept;

}  // namespace bhgen
