#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bhgen/rng.hpp"

namespace bhgen {

enum class LifetimeKind { exponential, lognormal, gamma, deterministic };

/// Strictly positive lifetime law (time unit: hours).
///
/// Immutable after construction. Lognormal laws are specified by their
/// natural-scale mean and standard deviation; the log-scale parameters are
///   sigma^2 = log(1 + sd^2 / mean^2),  mu = log(mean) - sigma^2 / 2.
class LifetimeDistribution {
 public:
  static LifetimeDistribution exponential(double rate);
  static LifetimeDistribution lognormal(double mean, double sd);
  static LifetimeDistribution gamma(double shape, double scale);
  static LifetimeDistribution deterministic(double value);

  LifetimeKind kind() const noexcept { return kind_; }
  double param1() const noexcept { return a_; }
  double param2() const noexcept { return b_; }

  /// Log-scale (mu, sigma) of a lognormal law.
  double log_mu() const noexcept { return mu_; }
  double log_sigma() const noexcept { return sigma_; }

  /// Lattice laws violate the non-lattice assumption of the limit theory.
  bool is_lattice() const noexcept { return kind_ == LifetimeKind::deterministic; }

  double sample(RngStream& rng) const;
  double cdf(double t) const;
  double pdf(double t) const;
  double quantile(double q) const;
  double median() const { return quantile(0.5); }
  double mean() const;

  /// E(exp(-s L)). Closed form where one exists, otherwise quadrature.
  double laplace(double s) const;
  /// E(L exp(-s L)) = -d/ds laplace(s).
  double laplace_weighted(double s) const;

  /// Quadrature route for the two functionals regardless of closed forms:
  /// adaptive Gauss-Kronrod on [0, Q(1 - 1e-12)] with relative tolerance 1e-10.
  double laplace_quadrature(double s) const;
  double laplace_weighted_quadrature(double s) const;

  std::string describe() const;

  friend bool operator==(const LifetimeDistribution&,
                         const LifetimeDistribution&) = default;

 private:
  LifetimeDistribution(LifetimeKind kind, double a, double b);

  LifetimeKind kind_;
  double a_;
  double b_;
  double mu_ = 0.0;
  double sigma_ = 0.0;
};

/// One offspring outcome: number of type-1 and type-2 children.
struct Offspring {
  std::uint32_t type1 = 0;
  std::uint32_t type2 = 0;

  std::uint32_t total() const noexcept { return type1 + type2; }
  friend bool operator==(const Offspring&, const Offspring&) = default;
};

/// Finite-support offspring law. Scalar laws (arity 1) put every child in
/// the parent's own type; pair laws (arity 2) describe type-1 parents.
class OffspringDistribution {
 public:
  static constexpr std::size_t max_outcomes = 64;

  static OffspringDistribution scalar(std::vector<std::uint32_t> support,
                                      std::vector<double> probs);
  static OffspringDistribution pair(std::vector<Offspring> support,
                                    std::vector<double> probs);
  /// Joint pmf from a total-offspring pmf where each child is independently
  /// type-2 with probability p_type2.
  static OffspringDistribution from_children(std::vector<std::uint32_t> totals,
                                             std::vector<double> probs,
                                             double p_type2);

  int arity() const noexcept { return arity_; }
  std::span<const Offspring> support() const noexcept { return support_; }
  std::span<const double> probs() const noexcept { return probs_; }

  /// h = E(N) for scalar laws, the type-1 mean h1 for pair laws.
  double mean() const;
  /// Mean number of type-2 children (h2); zero for scalar laws.
  double mean_type2() const;
  /// v = E(N(N-1)) of the first coordinate.
  double factorial_moment2() const;
  /// Law of the type-1 coordinate as a scalar distribution.
  OffspringDistribution marginal_type1() const;

  Offspring sample(RngStream& rng) const;

  friend bool operator==(const OffspringDistribution&,
                         const OffspringDistribution&) = default;

 private:
  OffspringDistribution(int arity, std::vector<Offspring> support,
                        std::vector<double> probs);

  int arity_;
  std::vector<Offspring> support_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

}  // namespace bhgen
