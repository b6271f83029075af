#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "semiflow/trajectory.hpp"

namespace semiflow {

struct GraphVertex {
  double time = 0.0;
  double value = 0.0;
  bool operator==(const GraphVertex&) const = default;
};

/// Graph of the extended scalar function on [-1, M + 1] with a vertical
/// segment at every jump, as a polyline in the (time, value) plane.
struct CompletedGraph {
  std::vector<GraphVertex> vertices;
};

CompletedGraph completed_graph(const ScalarTrajectory& phi, double horizon);

enum class MatchingKernel {
  /// Exact decision over the free space of the two polylines, bisected to
  /// `tol`.
  kFreeSpace,
  /// Monotone alignment of points sampled `resolution` times per polyline
  /// edge, resolution doubled until successive values agree within `tol`.
  kSampled,
};

struct SkorokhodOptions {
  MatchingKernel kernel = MatchingKernel::kFreeSpace;
  int resolution = 64;
  double tol = 1e-10;
  int max_bisections = 200;
  int max_doublings = 4;
};

/// d_M with its certificate: lower <= true distance <= upper, value == upper.
struct DistanceBracket {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Fréchet distance (sup norm in the plane) between two completed graphs.
/// Symmetric: both argument orders are evaluated and the larger kept.
DistanceBracket graph_distance(const CompletedGraph& a, const CompletedGraph& b,
                               const SkorokhodOptions& opts = {});

/// Completed-graph Skorokhod distance on [-1, M + 1] between scalar paths.
DistanceBracket d_M_bracket(const ScalarTrajectory& phi, const ScalarTrajectory& psi,
                            double horizon, const SkorokhodOptions& opts = {});
double d_M(const ScalarTrajectory& phi, const ScalarTrajectory& psi, double horizon,
           const SkorokhodOptions& opts = {});

/// Sup distance of the two extended functions on [-1, M + 1]; an upper bound
/// for d_M (identity time change).
double sup_distance(const ScalarTrajectory& phi, const ScalarTrajectory& psi, double horizon);

struct MetricTerm {
  int M = 0;
  int k = 0;
  double dM = 0.0;
};

/// Truncated d_inf. value <= d_inf <= value + tail_bound.
struct MetricReport {
  double value = 0.0;
  int truncation_N = 0;
  double tail_bound = 0.0;
  /// Terms with M + k <= N and k <= dim; coordinates beyond dim vanish.
  std::vector<MetricTerm> terms;
};

/// (N + 1) 2^-N, the mass of all terms with M + k > N.
double truncation_tail_bound(int N);

MetricReport d_inf(const Trajectory& phi, const Trajectory& psi, int N = 12,
                   const SkorokhodOptions& opts = {});

// ---------------------------------------------------------------------------
// Convergence diagnostics.

/// A sequence is judged convergent at a point when every error in its final
/// `window` members is within `tol`.
struct TailCriterion {
  std::size_t window = 8;
  double tol = 1e-1;
  bool accepts(const std::vector<double>& errors) const;
};

struct PointwiseReport {
  /// Sample times that were checked (outside Disc(Phi)).
  std::vector<double> checked;
  /// Checked times where the projected values failed to converge.
  std::vector<double> exceptional;
  /// Sample times skipped because Phi jumps there.
  std::vector<double> skipped;
};

/// Pointwise a.e. convergence of <Phi^n(t), e_k> to <Phi(t), e_k> on the
/// sample grid, skipping discontinuities of the limit.
PointwiseReport check_convergence_ae(const std::vector<Trajectory>& sequence,
                                     const Trajectory& limit, std::size_t k,
                                     const std::vector<double>& sample_grid,
                                     const TailCriterion& criterion = {});

struct EquivalenceReport {
  bool pointwise_converges = false;
  bool skorokhod_converges = false;
  bool agree() const { return pointwise_converges == skorokhod_converges; }
  /// d_M(phi^n, phi) for every member.
  std::vector<double> distances;
  /// Per-member sup gap (continuous case) or empty.
  std::vector<double> sup_gaps;
  PointwiseReport pointwise;
};

/// Monotone sequences: a.e. convergence and d_M convergence must coincide.
/// Throws DomainError if a member is not monotone on [0, horizon].
EquivalenceReport check_monotone_equiv(const std::vector<ScalarTrajectory>& sequence,
                                       const ScalarTrajectory& limit, double horizon,
                                       const TailCriterion& criterion = {},
                                       const SkorokhodOptions& opts = {});

/// Continuous sequences: uniform convergence on [0, M] of coordinate k and
/// d_M convergence must coincide. Throws DomainError on a member that jumps
/// in (0, M].
EquivalenceReport check_continuous_uniform(const std::vector<Trajectory>& sequence,
                                           const Trajectory& limit, double horizon,
                                           std::size_t k, const TailCriterion& criterion = {},
                                           const SkorokhodOptions& opts = {});

}  // namespace semiflow
