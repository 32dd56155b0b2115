#include "bhgen/calibration.hpp"

#include <cmath>

#include <fmt/format.h>

#include "bhgen/error.hpp"

namespace bhgen {
namespace {

constexpr int kMaxBisection = 200;

}  // namespace

double solve_malthus(double h, const LifetimeDistribution& lifetime) {
  if (!(h > 1.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("Malthusian parameter needs h > 1, got {}", h));
  }
  auto excess = [&](double a) { return h * lifetime.laplace(a) - 1.0; };

  double lo = 0.0;
  double hi = 1.0;
  while (excess(hi) >= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 0x1.0p64) {
      throw Error(ErrorCode::bracket_failure,
                  "Malthusian bracket exceeded 2^64; malformed lifetime distribution");
    }
  }
  for (int i = 0; i < kMaxBisection; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double r = excess(mid);
    if (r == 0.0) return mid;
    (r > 0.0 ? lo : hi) = mid;
  }
  // the endpoint with the smaller residual
  return std::abs(excess(lo)) <= std::abs(excess(hi)) ? lo : hi;
}

Constants derived_constants(double h, double v, const LifetimeDistribution& lifetime,
                            double alpha) {
  Constants out;
  out.h = h;
  out.v = v;
  out.alpha = alpha;
  out.lattice_warning = lifetime.is_lattice();

  const double weighted = lifetime.laplace_weighted(alpha);
  out.alpha_prime = 1.0 / (h * h * weighted);
  out.c = (h - 1.0) / (h * h * alpha * weighted);

  const double second = lifetime.laplace(2.0 * alpha);
  const double denom = 1.0 - h * second;
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::defective_denominator,
                fmt::format("1 - h E(exp(-2 alpha L)) = {} is not positive; alpha {} "
                            "does not solve the Malthus equation for h {}",
                            denom, alpha, h));
  }
  out.k = v * second / denom;
  out.var_limit = out.k - 1.0;
  return out;
}

Constants single_type_constants(double h, double v, const LifetimeDistribution& lifetime) {
  return derived_constants(h, v, lifetime, solve_malthus(h, lifetime));
}

TwoTypeConstants two_type_constants(double h1, double h2, double mu,
                                    const LifetimeDistribution& lifetime1,
                                    const LifetimeDistribution& lifetime2) {
  if (!(h1 > 1.0) || !(mu > 1.0)) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("two-type constants need h1 > 1 and mu > 1 (h1={}, mu={})",
                            h1, mu));
  }
  TwoTypeConstants k;
  k.h1 = h1;
  k.h2 = h2;
  k.mu = mu;
  k.lattice_warning = lifetime1.is_lattice() || lifetime2.is_lattice();

  k.alpha1 = solve_malthus(h1, lifetime1);
  k.alpha2 = solve_malthus(mu, lifetime2);
  const double w1 = lifetime1.laplace_weighted(k.alpha1);
  const double w2 = lifetime2.laplace_weighted(k.alpha2);
  k.alpha1_prime = 1.0 / (h1 * h1 * w1);
  k.alpha2_prime = 1.0 / (mu * mu * w2);
  k.c1 = (h1 - 1.0) / (h1 * h1 * k.alpha1 * w1);
  k.c2 = (mu - 1.0) / (mu * mu * k.alpha2 * w2);
  k.d1 = k.c1 * h1 * k.alpha1_prime;
  k.d2 = k.c2 * mu * k.alpha2_prime;
  k.ordering = k.alpha1 < k.alpha2 ? MalthusOrdering::alpha1_less
                                   : MalthusOrdering::alpha2_less;

  const double l1_at_a2 = lifetime1.laplace(k.alpha2);
  const double denom12 = 1.0 - h1 * l1_at_a2;
  if (denom12 > 0.0) {
    k.c12 = h2 * k.c2 * l1_at_a2 / denom12;
    k.d12 = k.c12 * mu * k.alpha2_prime;
  } else if (k.ordering == MalthusOrdering::alpha1_less) {
    throw Error(ErrorCode::defective_denominator,
                fmt::format("1 - h1 E(exp(-alpha2 L1)) = {} is not positive", denom12));
  }

  const double l2_at_a1 = lifetime2.laplace(k.alpha1);
  const double denom21 = 1.0 - mu * l2_at_a1;
  if (denom21 > 0.0) {
    k.c21 = h2 * (1.0 - l2_at_a1) / (h2 * h2 * k.alpha1 * denom21);
    k.d21 = k.c21 * h1 * k.alpha1_prime;
    k.c21_renewal = h2 * k.alpha1_prime * (1.0 - l2_at_a1) / (k.alpha1 * denom21);
    k.d21_renewal = k.c21_renewal * h1 * k.alpha1_prime;
  } else if (k.ordering == MalthusOrdering::alpha2_less) {
    throw Error(ErrorCode::defective_denominator,
                fmt::format("1 - mu E(exp(-alpha1 L2)) = {} is not positive", denom21));
  }
  return k;
}

const char* to_string(MalthusOrdering ordering) noexcept {
  return ordering == MalthusOrdering::alpha1_less ? "alpha1_less" : "alpha2_less";
}

}  // namespace bhgen
