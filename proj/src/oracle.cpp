#include "bhgen/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

#include <fmt/format.h>

#include "bhgen/error.hpp"

namespace bhgen {
namespace {

using Grid = std::vector<double>;

Grid combine(const Grid& a, double wa, const Grid& b, double wb) {
  Grid out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = wa * a[i] + wb * b[i];
  return out;
}

// Per-cell moments of a single-type process.
struct SingleMoments {
  Grid m, g, z2, gz, g2;
};

SingleMoments single_moments(const LifetimeDistribution& lifetime, double h, double v,
                             double dt, std::size_t n, bool second_order) {
  const KernelMass plain(lifetime, dt, n, [](double) { return 1.0; });
  const KernelMass renewal(lifetime, dt, n, [h](double) { return h; });

  Grid survival(n + 1);
  for (std::size_t i = 0; i <= n; ++i) survival[i] = 1.0 - lifetime.cdf(dt * static_cast<double>(i));

  SingleMoments out;
  out.m = solve_volterra(survival, renewal);

  auto g_task = std::async(std::launch::async, [&] {
    Grid f = convolve(out.m, plain);
    for (auto& x : f) x *= h;
    return solve_volterra(f, renewal);
  });
  if (second_order) {
    Grid m_sq(n + 1);
    for (std::size_t i = 0; i <= n; ++i) m_sq[i] = out.m[i] * out.m[i];
    out.z2 = solve_volterra(combine(survival, 1.0, convolve(m_sq, plain), v), renewal);
  }
  out.g = g_task.get();
  if (!second_order) return out;

  Grid gm_m(n + 1), gm_sq(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double gm = out.g[i] + out.m[i];
    gm_m[i] = gm * out.m[i];
    gm_sq[i] = gm * gm;
  }
  out.gz = solve_volterra(combine(convolve(out.z2, plain), h, convolve(gm_m, plain), v), renewal);
  out.g2 = solve_volterra(
      combine(convolve(combine(out.gz, 2.0, out.z2, 1.0), plain), h, convolve(gm_sq, plain), v),
      renewal);
  return out;
}

}  // namespace

const char* to_string(MomentId id) noexcept {
  switch (id) {
    case MomentId::EZ: return "EZ";
    case MomentId::EG: return "EG";
    case MomentId::EZ2: return "EZ2";
    case MomentId::EGZ: return "EGZ";
    case MomentId::EG2: return "EG2";
    case MomentId::E1Z2: return "E1Z2";
    case MomentId::E1G2: return "E1G2";
  }
  return "?";
}

MomentId moment_id_from_string(std::string_view name) {
  for (auto id : {MomentId::EZ, MomentId::EG, MomentId::EZ2, MomentId::EGZ, MomentId::EG2,
                  MomentId::E1Z2, MomentId::E1G2}) {
    if (name == to_string(id)) return id;
  }
  throw Error(ErrorCode::invalid_argument, fmt::format("unknown moment id '{}'", name));
}

double MomentGrid::at(double t) const {
  const double x = t / dt;
  const auto n = values.size() - 1;
  if (!(x >= -1e-9) || x > static_cast<double>(n) + 1e-6) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("t={} lies outside the moment grid [0, {}]", t, t_max()));
  }
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(std::max(0.0, std::floor(x))),
                                       n > 0 ? n - 1 : 0);
  if (n == 0) return values[0];
  const double frac = std::clamp(x - static_cast<double>(i), 0.0, 1.0);
  return values[i] + frac * (values[i + 1] - values[i]);
}

KernelMass::KernelMass(const LifetimeDistribution& lifetime, double dt, std::size_t n_steps,
                       const std::function<double(double)>& weight)
    : dt_(dt), mass_(n_steps + 1, 0.0) {
  if (!(dt > 0.0)) throw Error(ErrorCode::invalid_argument, "dt must be positive");
  double prev = lifetime.cdf(0.0);
  for (std::size_t j = 1; j <= n_steps; ++j) {
    const double cur = lifetime.cdf(dt * static_cast<double>(j));
    mass_[j] = weight(dt * (static_cast<double>(j) - 0.5)) * (cur - prev);
    prev = cur;
  }
}

double KernelMass::total() const { return std::accumulate(mass_.begin(), mass_.end(), 0.0); }

void check_resolution(double dt, const LifetimeDistribution& lifetime) {
  const double limit = lifetime.median() / 50.0;
  if (!(dt > 0.0) || dt > limit) {
    throw Error(ErrorCode::instability,
                fmt::format("dt={} does not resolve {} (need dt <= median/50 = {})", dt,
                            lifetime.describe(), limit));
  }
}

std::vector<double> solve_volterra(std::span<const double> forcing, const KernelMass& kernel) {
  const std::size_t n = kernel.steps();
  if (forcing.size() != n + 1) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("forcing has {} points, kernel covers {}", forcing.size(), n + 1));
  }
  const auto m = kernel.mass();
  std::vector<double> k(n + 1, 0.0);
  k[0] = forcing[0];
  const double diag = n >= 1 ? 1.0 - 0.5 * m[1] : 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    double acc = forcing[i] + 0.5 * m[1] * k[i - 1];
    for (std::size_t j = 2; j <= i; ++j) acc += 0.5 * m[j] * (k[i - j] + k[i - j + 1]);
    k[i] = acc / diag;
  }
  return k;
}

std::vector<double> convolve(std::span<const double> g, const KernelMass& kernel) {
  const std::size_t n = kernel.steps();
  if (g.size() != n + 1) {
    throw Error(ErrorCode::invalid_argument, "convolution operand does not match kernel grid");
  }
  const auto m = kernel.mass();
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= i; ++j) acc += m[j] * (g[i - j] + g[i - j + 1]);
    out[i] = 0.5 * acc;
  }
  return out;
}

double default_dt(const ProcessSpec& spec) {
  double dt = 0.05;
  for (const auto& l : spec.lifetime) dt = std::min(dt, l.median() / 100.0);
  return dt;
}

std::size_t grid_steps(double dt, double t_max) {
  if (!(dt > 0.0) || !(t_max > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "dt and t_max must be positive");
  }
  const double ratio = t_max / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) < 1e-9 * std::max(1.0, ratio)) {
    return static_cast<std::size_t>(rounded);
  }
  return static_cast<std::size_t>(std::ceil(ratio));
}

std::vector<MomentGrid> moment_grids(const ProcessSpec& spec, double dt, double t_max) {
  spec.validate();
  for (const auto& l : spec.lifetime) check_resolution(dt, l);
  const std::size_t n = grid_steps(dt, t_max);

  auto scaled = [&](MomentId id, Grid v) { return MomentGrid{id, dt, std::move(v)}; };

  std::vector<MomentGrid> out;
  if (spec.n_types == 1) {
    const auto& law = *spec.offspring_type1;
    const auto s = single_moments(spec.lifetime[0], law.mean(), law.factorial_moment2(), dt, n,
                                  true);
    const double n0 = static_cast<double>(spec.initial_count(1));
    const double pairs = n0 * (n0 - 1.0);
    Grid ez(n + 1), eg(n + 1), ez2(n + 1), egz(n + 1), eg2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      ez[i] = n0 * s.m[i];
      eg[i] = n0 * s.g[i];
      ez2[i] = n0 * s.z2[i] + pairs * s.m[i] * s.m[i];
      egz[i] = n0 * s.gz[i] + pairs * s.g[i] * s.m[i];
      eg2[i] = n0 * s.g2[i] + pairs * s.g[i] * s.g[i];
    }
    out.push_back(scaled(MomentId::EZ, std::move(ez)));
    out.push_back(scaled(MomentId::EG, std::move(eg)));
    out.push_back(scaled(MomentId::EZ2, std::move(ez2)));
    out.push_back(scaled(MomentId::EGZ, std::move(egz)));
    out.push_back(scaled(MomentId::EG2, std::move(eg2)));
    return out;
  }

  const auto& law1 = *spec.offspring_type1;
  const double h1 = law1.mean();
  const double h2 = law1.mean_type2();
  const auto& law2 = *spec.offspring_type2;
  const auto t2 = single_moments(spec.lifetime[1], law2.mean(), law2.factorial_moment2(), dt, n,
                                 false);

  const KernelMass plain1(spec.lifetime[0], dt, n, [](double) { return 1.0; });
  const KernelMass renewal1(spec.lifetime[0], dt, n, [h1](double) { return h1; });

  Grid f = convolve(t2.m, plain1);
  for (auto& x : f) x *= h2;
  const Grid z12 = solve_volterra(f, renewal1);

  Grid inner(n + 1);
  for (std::size_t i = 0; i <= n; ++i) inner[i] = h1 * z12[i] + h2 * (t2.g[i] + t2.m[i]);
  const Grid g12 = solve_volterra(convolve(inner, plain1), renewal1);

  const double n1 = static_cast<double>(spec.initial_count(1));
  const double n2 = static_cast<double>(spec.initial_count(2));
  out.push_back(scaled(MomentId::E1Z2, combine(z12, n1, t2.m, n2)));
  out.push_back(scaled(MomentId::E1G2, combine(g12, n1, t2.g, n2)));
  return out;
}

}  // namespace bhgen
