#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "semiflow/bundle.hpp"
#include "semiflow/trajectory.hpp"

namespace semiflow {

/// Solutions of x' = c |x|^alpha started at x(0) = 0 after waiting s units of
/// time: x_s(t) = 0 for t <= s and (c (1 - alpha) (t - s))^(1 / (1 - alpha))
/// afterwards. An infinite waiting time is the zero solution.
struct SqrtOdeFamily {
  double alpha = 0.5;
  double c = 1.0;
  std::vector<double> waiting_times{0.0, 1.0, 2.0, std::numeric_limits<double>::infinity()};
  /// Sampling window [0, horizon] of the nonzero part; the value reached at
  /// the end of the window is held as the tail.
  double horizon = 8.0;
  std::size_t samples_per_unit = 16;
  std::vector<double> time_grid{0.5, 1.0, 1.5, 2.0};
  double quantum = kDefaultQuantum;

  void validate() const;
};

/// Closed-form value of x_s at t.
double sqrt_ode_exact(const SqrtOdeFamily& family, double s, double t);

/// x_s sampled every 1 / samples_per_unit time units after s and joined
/// linearly.
Trajectory sqrt_ode_solution(const SqrtOdeFamily& family, double s);

/// The seed family at x = 0, closed under shift and continuation on the time
/// grid. The bundle horizon equals family.horizon. Throws Error if the
/// closure does not reach a fixed point within the default budget.
Bundle gen_sqrt_ode_bundle(const SqrtOdeFamily& family);

/// Non-increasing step function starting at heights[0] and dropping to
/// heights[i + 1] right after jump_times[i]. Needs heights.size() =
/// jump_times.size() + 1 and jump times increasing in (0, horizon).
ScalarTrajectory step_function(const std::vector<double>& heights,
                               const std::vector<double>& jump_times, double horizon);

/// The ladder of step functions obtained by keeping the first 0, 1, ..., J
/// jumps of the prescribed profile.
std::vector<ScalarTrajectory> gen_step_family(const std::vector<double>& heights,
                                              const std::vector<double>& jump_times,
                                              double horizon);

/// The step ladder filed as a dim-1 bundle and closed on `time_grid`.
Bundle gen_step_bundle(const std::vector<double>& heights, const std::vector<double>& jump_times,
                       double horizon, std::vector<double> time_grid,
                       double quantum = kDefaultQuantum);

struct RandomTrajectoryOptions {
  std::size_t dim = 1;
  std::size_t max_breakpoints = 4;
  double max_time = 4.0;
  double value_range = 2.0;
  /// Probability of a linear piece; otherwise the piece is constant.
  double linear_fraction = 0.5;
};

/// Random trajectory with values on a 1/64 grid in [-value_range,
/// value_range] and breakpoints on a 1/16 grid in (0, max_time]. The draw
/// depends only on the engine output, not on the standard library's
/// distributions.
Trajectory random_trajectory(std::mt19937_64& rng, const RandomTrajectoryOptions& options = {});

}  // namespace semiflow
