#include "bhgen/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/lognormal.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <fmt/format.h>

#include "bhgen/error.hpp"

namespace bhgen {
namespace {

constexpr double kQuadratureTolerance = 1e-10;
constexpr double kTailMass = 1e-12;
constexpr std::size_t kMaxLevels = 15;

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("{} must be a positive finite number, got {}", what, x));
  }
}

template <class F>
double integrate(F f, double upper) {
  double error = 0.0;
  double l1 = 0.0;
  // tanh-sinh copes with the integrable pdf singularity at 0 (gamma shape < 1)
  thread_local boost::math::quadrature::tanh_sinh<double> rule(kMaxLevels);
  const double value = rule.integrate(f, 0.0, upper, kQuadratureTolerance, &error, &l1);
  if (!std::isfinite(value) || error > kQuadratureTolerance * l1) {
    throw Error(ErrorCode::quadrature_nonconvergence,
                fmt::format("quadrature did not reach relative tolerance {} "
                            "(estimate {}, error {})",
                            kQuadratureTolerance, value, error));
  }
  return value;
}

}  // namespace

LifetimeDistribution::LifetimeDistribution(LifetimeKind kind, double a, double b)
    : kind_(kind), a_(a), b_(b) {}

LifetimeDistribution LifetimeDistribution::exponential(double rate) {
  require_positive(rate, "exponential rate");
  return LifetimeDistribution(LifetimeKind::exponential, rate, 0.0);
}

LifetimeDistribution LifetimeDistribution::lognormal(double mean, double sd) {
  require_positive(mean, "lognormal mean");
  require_positive(sd, "lognormal sd");
  LifetimeDistribution d(LifetimeKind::lognormal, mean, sd);
  const double s2 = std::log1p((sd / mean) * (sd / mean));
  d.sigma_ = std::sqrt(s2);
  d.mu_ = std::log(mean) - 0.5 * s2;
  return d;
}

LifetimeDistribution LifetimeDistribution::gamma(double shape, double scale) {
  require_positive(shape, "gamma shape");
  require_positive(scale, "gamma scale");
  return LifetimeDistribution(LifetimeKind::gamma, shape, scale);
}

LifetimeDistribution LifetimeDistribution::deterministic(double value) {
  require_positive(value, "deterministic lifetime");
  return LifetimeDistribution(LifetimeKind::deterministic, value, 0.0);
}

double LifetimeDistribution::sample(RngStream& rng) const {
  auto& eng = rng.engine();
  double x = 0.0;
  switch (kind_) {
    case LifetimeKind::exponential: {
      std::exponential_distribution<double> d(a_);
      do { x = d(eng); } while (!(x > 0.0));
      return x;
    }
    case LifetimeKind::lognormal: {
      std::lognormal_distribution<double> d(mu_, sigma_);
      do { x = d(eng); } while (!(x > 0.0));
      return x;
    }
    case LifetimeKind::gamma: {
      std::gamma_distribution<double> d(a_, b_);
      do { x = d(eng); } while (!(x > 0.0));
      return x;
    }
    case LifetimeKind::deterministic:
      return a_;
  }
  return a_;
}

double LifetimeDistribution::cdf(double t) const {
  if (t <= 0.0) {
    return kind_ == LifetimeKind::deterministic && t >= a_ ? 1.0 : 0.0;
  }
  if (std::isinf(t)) return 1.0;
  switch (kind_) {
    case LifetimeKind::exponential:
      return -std::expm1(-a_ * t);
    case LifetimeKind::lognormal:
      return 0.5 * std::erfc(-(std::log(t) - mu_) / (sigma_ * std::sqrt(2.0)));
    case LifetimeKind::gamma:
      return boost::math::gamma_p(a_, t / b_);
    case LifetimeKind::deterministic:
      return t >= a_ ? 1.0 : 0.0;
  }
  return 0.0;
}

double LifetimeDistribution::pdf(double t) const {
  if (t <= 0.0) return 0.0;
  switch (kind_) {
    case LifetimeKind::exponential:
      return a_ * std::exp(-a_ * t);
    case LifetimeKind::lognormal: {
      const double z = (std::log(t) - mu_) / sigma_;
      return std::exp(-0.5 * z * z) / (t * sigma_ * std::sqrt(2.0 * M_PI));
    }
    case LifetimeKind::gamma:
      return boost::math::gamma_p_derivative(a_, t / b_) / b_;
    case LifetimeKind::deterministic:
      throw Error(ErrorCode::invalid_argument,
                  "deterministic lifetime has no density");
  }
  return 0.0;
}

double LifetimeDistribution::quantile(double q) const {
  if (!(q >= 0.0 && q < 1.0)) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("quantile level must lie in [0, 1), got {}", q));
  }
  switch (kind_) {
    case LifetimeKind::exponential:
      return -std::log1p(-q) / a_;
    case LifetimeKind::lognormal:
      return boost::math::quantile(boost::math::lognormal_distribution<double>(mu_, sigma_), q);
    case LifetimeKind::gamma:
      return boost::math::quantile(boost::math::gamma_distribution<double>(a_, b_), q);
    case LifetimeKind::deterministic:
      return a_;
  }
  return a_;
}

double LifetimeDistribution::mean() const {
  switch (kind_) {
    case LifetimeKind::exponential:
      return 1.0 / a_;
    case LifetimeKind::lognormal:
      return a_;
    case LifetimeKind::gamma:
      return a_ * b_;
    case LifetimeKind::deterministic:
      return a_;
  }
  return a_;
}

double LifetimeDistribution::laplace(double s) const {
  if (!(s >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "Laplace argument must be nonnegative");
  }
  if (s == 0.0) return 1.0;
  switch (kind_) {
    case LifetimeKind::exponential:
      return a_ / (a_ + s);
    case LifetimeKind::gamma:
      return std::pow(1.0 + b_ * s, -a_);
    case LifetimeKind::deterministic:
      return std::exp(-s * a_);
    case LifetimeKind::lognormal:
      return laplace_quadrature(s);
  }
  return 0.0;
}

double LifetimeDistribution::laplace_weighted(double s) const {
  if (!(s >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "Laplace argument must be nonnegative");
  }
  switch (kind_) {
    case LifetimeKind::exponential:
      return a_ / ((a_ + s) * (a_ + s));
    case LifetimeKind::gamma:
      return a_ * b_ * std::pow(1.0 + b_ * s, -a_ - 1.0);
    case LifetimeKind::deterministic:
      return a_ * std::exp(-s * a_);
    case LifetimeKind::lognormal:
      if (s == 0.0) return a_;
      return laplace_weighted_quadrature(s);
  }
  return 0.0;
}

double LifetimeDistribution::laplace_quadrature(double s) const {
  if (kind_ == LifetimeKind::deterministic) return std::exp(-s * a_);
  const double upper = quantile(1.0 - kTailMass);
  return integrate([&](double u) { return std::exp(-s * u) * pdf(u); }, upper);
}

double LifetimeDistribution::laplace_weighted_quadrature(double s) const {
  if (kind_ == LifetimeKind::deterministic) return a_ * std::exp(-s * a_);
  const double upper = quantile(1.0 - kTailMass);
  return integrate([&](double u) { return u * std::exp(-s * u) * pdf(u); }, upper);
}

std::string LifetimeDistribution::describe() const {
  switch (kind_) {
    case LifetimeKind::exponential:
      return fmt::format("exponential(rate={})", a_);
    case LifetimeKind::lognormal:
      return fmt::format("lognormal(mean={}, sd={})", a_, b_);
    case LifetimeKind::gamma:
      return fmt::format("gamma(shape={}, scale={})", a_, b_);
    case LifetimeKind::deterministic:
      return fmt::format("deterministic({})", a_);
  }
  return "unknown";
}

// ---------------------------------------------------------------------------

OffspringDistribution::OffspringDistribution(int arity, std::vector<Offspring> support,
                                             std::vector<double> probs)
    : arity_(arity), support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.empty()) {
    throw Error(ErrorCode::invalid_argument, "offspring support is empty");
  }
  if (support_.size() != probs_.size()) {
    throw Error(ErrorCode::invalid_argument,
                "offspring support and probabilities differ in length");
  }
  if (support_.size() > max_outcomes) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("offspring support limited to {} outcomes", max_outcomes));
  }
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorCode::invalid_argument, "offspring probabilities must be nonnegative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("offspring probabilities sum to {:.17g}, not 1", total));
  }
  for (std::size_t i = 0; i < support_.size(); ++i) {
    for (std::size_t j = i + 1; j < support_.size(); ++j) {
      if (support_[i] == support_[j]) {
        throw Error(ErrorCode::invalid_argument, "offspring support entries must be distinct");
      }
    }
  }
  cumulative_.resize(probs_.size());
  std::partial_sum(probs_.begin(), probs_.end(), cumulative_.begin());
  cumulative_.back() = 1.0;
}

OffspringDistribution OffspringDistribution::scalar(std::vector<std::uint32_t> support,
                                                    std::vector<double> probs) {
  std::vector<Offspring> s;
  s.reserve(support.size());
  for (auto n : support) s.push_back({n, 0});
  return OffspringDistribution(1, std::move(s), std::move(probs));
}

OffspringDistribution OffspringDistribution::pair(std::vector<Offspring> support,
                                                  std::vector<double> probs) {
  return OffspringDistribution(2, std::move(support), std::move(probs));
}

OffspringDistribution OffspringDistribution::from_children(
    std::vector<std::uint32_t> totals, std::vector<double> probs, double p_type2) {
  if (!(p_type2 >= 0.0 && p_type2 <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "per-child type-2 probability must lie in [0,1]");
  }
  if (totals.size() != probs.size()) {
    throw Error(ErrorCode::invalid_argument,
                "offspring support and probabilities differ in length");
  }
  // keyed by (type1, type2) so the expanded support is ordered and distinct
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> joint;
  for (std::size_t i = 0; i < totals.size(); ++i) {
    const std::uint32_t n = totals[i];
    for (std::uint32_t k = 0; k <= n; ++k) {
      const double w = boost::math::binomial_coefficient<double>(n, k) *
                       std::pow(p_type2, k) * std::pow(1.0 - p_type2, n - k);
      if (w == 0.0) continue;
      joint[{n - k, k}] += probs[i] * w;
    }
  }
  std::vector<Offspring> s;
  std::vector<double> p;
  for (const auto& [key, w] : joint) {
    s.push_back({key.first, key.second});
    p.push_back(w);
  }
  return OffspringDistribution(2, std::move(s), std::move(p));
}

double OffspringDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) m += probs_[i] * support_[i].type1;
  return m;
}

double OffspringDistribution::mean_type2() const {
  double m = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) m += probs_[i] * support_[i].type2;
  return m;
}

double OffspringDistribution::factorial_moment2() const {
  double m = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    const double n = support_[i].type1;
    m += probs_[i] * n * (n - 1.0);
  }
  return m;
}

OffspringDistribution OffspringDistribution::marginal_type1() const {
  std::map<std::uint32_t, double> m;
  for (std::size_t i = 0; i < support_.size(); ++i) m[support_[i].type1] += probs_[i];
  std::vector<std::uint32_t> s;
  std::vector<double> p;
  for (const auto& [n, w] : m) {
    s.push_back(n);
    p.push_back(w);
  }
  return scalar(std::move(s), std::move(p));
}

Offspring OffspringDistribution::sample(RngStream& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto idx = std::min<std::size_t>(
      static_cast<std::size_t>(it - cumulative_.begin()), support_.size() - 1);
  return support_[idx];
}

}  // namespace bhgen
