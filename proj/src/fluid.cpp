#include "semiflow/fluid.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "semiflow/errors.hpp"

namespace semiflow {

void PressureLaw::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("pressure constant a must be positive");
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) throw DomainError("adiabatic exponent must be >= 1");
}

void FluidState::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("domain length must be positive");
  if (rho.empty()) throw DomainError("fluid state needs at least one cell");
  if (m.size() != rho.size()) throw DomainError("density and momentum sizes differ");
  for (double r : rho) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("density must be finite and non-negative");
  }
  for (double v : m) {
    if (!std::isfinite(v)) throw DomainError("momentum must be finite");
  }
  if (std::isnan(energy)) throw DomainError("energy must not be NaN");
}

double pressure(const PressureLaw& law, double rho) {
  law.validate();
  if (!(rho >= 0.0)) throw DomainError("negative density");
  if (rho == 0.0) return 0.0;
  return law.a * std::pow(rho, law.gamma);
}

double pressure_potential(const PressureLaw& law, double rho) {
  law.validate();
  if (!(rho >= 0.0)) throw DomainError("negative density");
  if (rho == 0.0) return 0.0;
  if (law.gamma == 1.0) return law.a * rho * std::log(rho);
  return law.a / (law.gamma - 1.0) * std::pow(rho, law.gamma);
}

double energy_functional(const FluidState& state, const PressureLaw& law) {
  state.validate();
  double sum = 0.0;
  for (std::size_t i = 0; i < state.cells(); ++i) {
    const double r = state.rho[i];
    const double m = state.m[i];
    double kinetic = 0.0;
    if (m != 0.0) {
      if (r == 0.0) return std::numeric_limits<double>::infinity();
      kinetic = 0.5 * m * m / r;
    }
    sum += kinetic + pressure_potential(law, r);
  }
  return state.spacing() * sum;
}

bool d_membership(const FluidState& state, const PressureLaw& law) {
  const double e = energy_functional(state, law);
  return std::isfinite(e) && e <= state.energy;
}

bool admissible_leq(const ScalarTrajectory& e1, const ScalarTrajectory& e2,
                    const std::vector<double>& grid) {
  const double inf = std::numeric_limits<double>::infinity();
  if (e1.dim() != 1 || e2.dim() != 1) throw DomainError("energy profiles must be scalar");
  if (!is_nonincreasing(e1, inf) || !is_nonincreasing(e2, inf)) {
    throw DomainError("energy profiles must be non-increasing");
  }
  for (double tau : grid) {
    if (e1.eval(tau, 0) > e2.eval(tau, 0)) return false;
    if (e1.right_limit(tau, 0) > e2.right_limit(tau, 0)) return false;
  }
  return true;
}

double mode_weight(std::size_t j, double length, double sobolev_order) {
  const double w = std::numbers::pi * static_cast<double>(j) / length;
  return std::pow(1.0 + w * w, -0.5 * sobolev_order);
}

namespace {

// Orthonormal cosine coefficients on [0, L] sampled at cell centres.
std::vector<double> cosine_coefficients(const std::vector<double>& f, double length,
                                        std::size_t n_modes) {
  const std::size_t n = f.size();
  const double h = length / static_cast<double>(n);
  std::vector<double> out(n_modes, 0.0);
  for (std::size_t j = 0; j < n_modes; ++j) {
    const double norm = j == 0 ? std::sqrt(1.0 / length) : std::sqrt(2.0 / length);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = (static_cast<double>(i) + 0.5) * h;
      acc += f[i] * std::cos(std::numbers::pi * static_cast<double>(j) * x / length);
    }
    out[j] = h * norm * acc;
  }
  return out;
}

}  // namespace

Point embed_state(const FluidState& state, std::size_t n_modes, double sobolev_order) {
  state.validate();
  if (n_modes == 0 || n_modes > state.cells()) {
    throw DomainError("number of modes must lie in 1..cells");
  }
  const auto rho = cosine_coefficients(state.rho, state.length, n_modes);
  const auto m = cosine_coefficients(state.m, state.length, n_modes);
  Point out;
  out.reserve(2 * n_modes + 1);
  for (std::size_t j = 0; j < n_modes; ++j) out.push_back(mode_weight(j, state.length, sobolev_order) * rho[j]);
  for (std::size_t j = 0; j < n_modes; ++j) out.push_back(mode_weight(j, state.length, sobolev_order) * m[j]);
  out.push_back(state.energy);
  return out;
}

}  // namespace semiflow
