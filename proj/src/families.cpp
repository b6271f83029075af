#include "semiflow/families.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "semiflow/errors.hpp"

namespace semiflow {

void SqrtOdeFamily::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("rate c must be positive");
  if (waiting_times.empty()) throw DomainError("at least one waiting time is required");
  for (double s : waiting_times) {
    if (!(s >= 0.0)) throw DomainError("waiting times must be non-negative");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be positive");
  if (samples_per_unit == 0) throw DomainError("samples_per_unit must be positive");
  if (!(quantum > 0.0)) throw DomainError("quantum must be positive");
}

double sqrt_ode_exact(const SqrtOdeFamily& family, double s, double t) {
  if (!(t > s)) return 0.0;
  const double beta = 1.0 - family.alpha;
  return std::pow(family.c * beta * (t - s), 1.0 / beta);
}

Trajectory sqrt_ode_solution(const SqrtOdeFamily& family, double s) {
  family.validate();
  if (!(s >= 0.0)) throw DomainError("waiting time must be non-negative");
  if (std::isinf(s)) return Trajectory::constant({0.0});
  const double h = 1.0 / static_cast<double>(family.samples_per_unit);
  const auto steps = static_cast<std::size_t>(std::ceil(family.horizon * family.samples_per_unit));
  TrajectoryBuilder b({0.0});
  if (s > 0.0) b.constant_until(s, {0.0});
  double prev = 0.0;
  for (std::size_t i = 1; i <= steps; ++i) {
    const double u = std::min(static_cast<double>(i) * h, family.horizon);
    const double v = sqrt_ode_exact(family, 0.0, u);
    b.linear_until(s + u, {prev}, {v});
    prev = v;
  }
  return std::move(b).finish({prev});
}

Bundle gen_sqrt_ode_bundle(const SqrtOdeFamily& family) {
  family.validate();
  Bundle seeds(1, family.quantum, family.time_grid, std::nullopt, family.horizon);
  for (double s : family.waiting_times) seeds.insert(sqrt_ode_solution(family, s));
  ClosureResult closed = generate_closure(seeds);
  if (!closed.complete) throw Error("sqrt-ODE closure exceeded its size budget");
  return std::move(closed.bundle);
}

ScalarTrajectory step_function(const std::vector<double>& heights,
                               const std::vector<double>& jump_times, double horizon) {
  if (heights.size() != jump_times.size() + 1) {
    throw DomainError("step profile needs one more height than jump times");
  }
  for (std::size_t i = 0; i < jump_times.size(); ++i) {
    const double t = jump_times[i];
    if (!(t > 0.0 && t < horizon)) throw DomainError("jump times must lie in (0, horizon)");
    if (i > 0 && !(t > jump_times[i - 1])) throw DomainError("jump times must increase");
    if (heights[i + 1] > heights[i]) throw DomainError("step heights must be non-increasing");
  }
  TrajectoryBuilder b({heights[0]});
  for (std::size_t i = 0; i < jump_times.size(); ++i) b.constant_until(jump_times[i], {heights[i]});
  return normalized(std::move(b).finish({heights.back()}));
}

std::vector<ScalarTrajectory> gen_step_family(const std::vector<double>& heights,
                                              const std::vector<double>& jump_times,
                                              double horizon) {
  step_function(heights, jump_times, horizon);
  std::vector<ScalarTrajectory> out;
  for (std::size_t m = 0; m <= jump_times.size(); ++m) {
    std::vector<double> h(heights.begin(), heights.begin() + static_cast<std::ptrdiff_t>(m) + 1);
    std::vector<double> t(jump_times.begin(), jump_times.begin() + static_cast<std::ptrdiff_t>(m));
    out.push_back(step_function(h, t, horizon));
  }
  return out;
}

Bundle gen_step_bundle(const std::vector<double>& heights, const std::vector<double>& jump_times,
                       double horizon, std::vector<double> time_grid, double quantum) {
  Bundle seeds(1, quantum, std::move(time_grid), std::nullopt, horizon);
  for (auto& phi : gen_step_family(heights, jump_times, horizon)) seeds.insert(std::move(phi));
  ClosureResult closed = generate_closure(seeds);
  if (!closed.complete) throw Error("step closure exceeded its size budget");
  return std::move(closed.bundle);
}

namespace {

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

double grid_value(std::mt19937_64& rng, double range) {
  const auto cells = static_cast<std::uint64_t>(std::floor(range * 64.0));
  return (static_cast<double>(below(rng, 2 * cells + 1)) - static_cast<double>(cells)) / 64.0;
}

Point random_point(std::mt19937_64& rng, std::size_t dim, double range) {
  Point p(dim);
  for (double& x : p) x = grid_value(rng, range);
  return p;
}

}  // namespace

Trajectory random_trajectory(std::mt19937_64& rng, const RandomTrajectoryOptions& options) {
  if (options.dim == 0) throw DomainError("dimension must be positive");
  const auto slots = static_cast<std::uint64_t>(std::floor(options.max_time * 16.0));
  if (slots < options.max_breakpoints) throw DomainError("time window too short for the breakpoints");
  const std::size_t count = below(rng, options.max_breakpoints + 1);
  std::set<std::uint64_t> picked;
  while (picked.size() < count) picked.insert(1 + below(rng, slots));

  const Point initial = random_point(rng, options.dim, options.value_range);
  TrajectoryBuilder b(initial);
  for (std::uint64_t slot : picked) {
    const double t = static_cast<double>(slot) / 16.0;
    const bool linear = static_cast<double>(below(rng, 1000)) < 1000.0 * options.linear_fraction;
    if (linear) {
      Point v0 = random_point(rng, options.dim, options.value_range);
      Point v1 = random_point(rng, options.dim, options.value_range);
      b.linear_until(t, std::move(v0), std::move(v1));
    } else {
      b.constant_until(t, random_point(rng, options.dim, options.value_range));
    }
  }
  return std::move(b).finish(random_point(rng, options.dim, options.value_range));
}

}  // namespace semiflow
