#pragma once

#include <cstddef>
#include <vector>

#include "semiflow/trajectory.hpp"

namespace semiflow {

/// Isentropic pressure p(rho) = a rho^gamma.
struct PressureLaw {
  double a = 1.0;
  double gamma = 1.0;

  /// Throws DomainError unless a > 0 and gamma >= 1.
  void validate() const;
};

/// Density, momentum and total energy of a one-dimensional flow on a uniform
/// grid of cells over [0, length].
struct FluidState {
  double length = 1.0;
  std::vector<double> rho;
  std::vector<double> m;
  double energy = 0.0;
  /// Compatibility constant attached to dissipative solutions; carried as
  /// metadata, never used in a computation here.
  double trace_constant = 1.0;

  std::size_t cells() const noexcept { return rho.size(); }
  double spacing() const { return length / static_cast<double>(rho.size()); }
  /// Throws DomainError on negative density, mismatched sizes, bad grid.
  void validate() const;
};

double pressure(const PressureLaw& law, double rho);

/// P with rho P'(rho) - P(rho) = p(rho): a rho log rho for gamma = 1,
/// a rho^gamma / (gamma - 1) otherwise. P(0) = 0.
double pressure_potential(const PressureLaw& law, double rho);

/// h * sum over cells of kinetic + P(rho). Kinetic density is m^2 / (2 rho),
/// 0 at vacuum without momentum and +inf at vacuum with momentum.
double energy_functional(const FluidState& state, const PressureLaw& law);

/// Initial-data admissibility: the energy functional does not exceed E0
/// (state.energy).
bool d_membership(const FluidState& state, const PressureLaw& law);

/// E1(t) <= E2(t) and E1(t+) <= E2(t+) at every grid time. Both profiles
/// must be non-increasing; throws DomainError otherwise.
bool admissible_leq(const ScalarTrajectory& e1, const ScalarTrajectory& e2,
                    const std::vector<double>& grid);

/// Spectral weight (1 + (pi j / L)^2)^(-order / 2) of cosine mode j.
double mode_weight(std::size_t j, double length, double sobolev_order);

/// Weighted cosine coefficients of rho (modes 0..n_modes-1), then of m,
/// then E: a vector of size 2 n_modes + 1. Linear in (rho, m).
Point embed_state(const FluidState& state, std::size_t n_modes, double sobolev_order = 2.0);

}  // namespace semiflow
