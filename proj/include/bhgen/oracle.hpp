#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "bhgen/distributions.hpp"
#include "bhgen/engine.hpp"

namespace bhgen {

enum class MomentId { EZ, EG, EZ2, EGZ, EG2, E1Z2, E1G2 };

const char* to_string(MomentId id) noexcept;
MomentId moment_id_from_string(std::string_view name);

/// A moment on the uniform grid {0, dt, ..., n dt}.
struct MomentGrid {
  MomentId id = MomentId::EZ;
  double dt = 0.0;
  std::vector<double> values;

  double t_max() const { return dt * static_cast<double>(values.size() - 1); }
  /// Linear interpolation; t must lie within the grid.
  double at(double t) const;
};

/// Renewal measure rho(du) = w(u) dP(L <= u) discretised on the grid: the
/// mass of interval j is w(midpoint) * (F(j dt) - F((j-1) dt)).
class KernelMass {
 public:
  KernelMass(const LifetimeDistribution& lifetime, double dt, std::size_t n_steps,
             const std::function<double(double)>& weight);

  double dt() const noexcept { return dt_; }
  std::size_t steps() const noexcept { return mass_.size() - 1; }
  /// mass()[j] for j in 1..steps(); mass()[0] is zero.
  std::span<const double> mass() const noexcept { return mass_; }
  double total() const;

 private:
  double dt_;
  std::vector<double> mass_;
};

/// Throws Error(instability) unless dt <= median(L) / 50.
void check_resolution(double dt, const LifetimeDistribution& lifetime);

/// Solves K(t) = f(t) + int_0^t K(t-u) rho(du) by trapezoidal forward
/// substitution. forcing.size() must equal kernel.steps() + 1.
std::vector<double> solve_volterra(std::span<const double> forcing, const KernelMass& kernel);

/// int_0^t g(t-u) rho(du) on the grid with the same trapezoid weights.
std::vector<double> convolve(std::span<const double> g, const KernelMass& kernel);

/// min(0.05 h, smallest median lifetime / 100).
double default_dt(const ProcessSpec& spec);

/// Number of grid steps covering [0, t_max].
std::size_t grid_steps(double dt, double t_max);

/// Moment grids for the spec's initial population. Single-type specs give
/// EZ, EG, EZ2, EGZ, EG2; two-type specs give E1Z2 and E1G2 (type-2 moments
/// under an initial type-1 population).
std::vector<MomentGrid> moment_grids(const ProcessSpec& spec, double dt, double t_max);

}  // namespace bhgen
