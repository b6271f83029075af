#pragma once

#include <cstddef>
#include <vector>

namespace semiflow {

/// A point of the coordinate space R^n.
using Point = std::vector<double>;

enum class SegmentKind { kConstant, kLinear };

/// Piece of a trajectory on a half-open interval (t_j, t_{j+1}].
///
/// `start` is the right limit at t_j, `end` the (left-continuous) value at
/// t_{j+1}. Constant segments keep start == end.
struct Segment {
  SegmentKind kind = SegmentKind::kConstant;
  Point start;
  Point end;

  static Segment constant(Point v);
  static Segment linear(Point v0, Point v1);

  bool operator==(const Segment&) const = default;
};

/// Left-continuous piecewise constant/linear path [0, inf) -> R^n with
/// finitely many breakpoints and a constant tail.
///
/// Breakpoints are 0 = t_0 < t_1 < ... < t_J; segment j covers
/// (t_j, t_{j+1}]. The value at t_0 is stored separately because the right
/// limit at 0 may differ from it. On (t_J, inf) the path equals `tail`.
/// Right limits are structural: Phi(t_j+) is the start of segment j, or the
/// tail for j = J. Instances are immutable.
class Trajectory {
 public:
  /// Validates every invariant; throws DomainError on violation.
  Trajectory(Point initial, std::vector<double> breakpoints, std::vector<Segment> segments,
             Point tail);

  static Trajectory constant(Point v);

  std::size_t dim() const noexcept { return initial_.size(); }
  const Point& initial_value() const noexcept { return initial_; }
  const Point& tail() const noexcept { return tail_; }
  /// Includes t_0 = 0.
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  /// t_J; zero when there are no segments.
  double last_breakpoint() const noexcept { return breakpoints_.back(); }

  Point eval(double t) const;
  Point right_limit(double t) const;
  /// Single-coordinate variants, `k` zero-based. No allocation.
  double eval(double t, std::size_t k) const;
  double right_limit(double t, std::size_t k) const;

  bool operator==(const Trajectory&) const = default;

 private:
  // Index of the segment whose interval (t_j, t_{j+1}] contains t > 0, or
  // segments_.size() when t lies in the tail.
  std::size_t segment_containing(double t) const;

  Point initial_;
  std::vector<double> breakpoints_;
  std::vector<Segment> segments_;
  Point tail_;
};

/// Trajectories of dimension one; the type is shared, operations check dim().
using ScalarTrajectory = Trajectory;

/// Incremental construction from t = 0 forwards.
class TrajectoryBuilder {
 public:
  explicit TrajectoryBuilder(Point initial);

  TrajectoryBuilder& constant_until(double t, Point v);
  TrajectoryBuilder& linear_until(double t, Point v0, Point v1);
  Trajectory finish(Point tail);

 private:
  Point initial_;
  std::vector<double> breakpoints_{0.0};
  std::vector<Segment> segments_;
};

/// Phi extended to [-1, T + 1]: Phi(0) on [-1, 0], Phi on (0, T), Phi(T) on
/// [T, T + 1].
class ExtendedTrajectory {
 public:
  ExtendedTrajectory(Trajectory base, double horizon);

  double horizon() const noexcept { return horizon_; }
  const Trajectory& base() const noexcept { return base_; }
  Point eval(double t) const;
  Point right_limit(double t) const;

 private:
  void check_range(double t) const;

  Trajectory base_;
  double horizon_;
};

ExtendedTrajectory extend(const Trajectory& phi, double horizon);

/// Coordinate projection t -> <Phi(t), e_k>, `k` one-based.
ScalarTrajectory project(const Trajectory& phi, std::size_t k);

/// Breakpoints in (0, M] where the value differs from the right limit.
std::vector<double> disc_set(const Trajectory& phi, double horizon);

/// S_T Phi (t) = Phi(T + t).
Trajectory shift(const Trajectory& phi, double T);

/// Phi1 on [0, T], Phi2(. - T) on (T, inf).
Trajectory continue_at(const Trajectory& phi1, const Trajectory& phi2, double T);

/// Same function, canonical representation: flat linear pieces become
/// constant, equal adjacent constants merge, trailing pieces equal to the
/// tail are dropped. Two trajectories built from the same pieces through
/// shift/continuation normalize to identical objects.
Trajectory normalized(const Trajectory& phi);

/// True when Phi(t) = Phi(0) for every t in [0, horizon].
bool is_constant_on(const Trajectory& phi, double horizon);

/// Monotonicity on [0, horizon] of a scalar trajectory.
bool is_nonincreasing(const ScalarTrajectory& phi, double horizon);
bool is_nondecreasing(const ScalarTrajectory& phi, double horizon);

}  // namespace semiflow
