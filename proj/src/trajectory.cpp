#include "semiflow/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "semiflow/errors.hpp"

namespace semiflow {

namespace {

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw DomainError("time must be finite and non-negative, got " + std::to_string(t));
  }
}

double lerp(double a, double b, double w) { return a + (b - a) * w; }

Point lerp(const Point& a, const Point& b, double w) {
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = lerp(a[i], b[i], w);
  return out;
}

bool all_finite(const Point& p) {
  return std::all_of(p.begin(), p.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

Segment Segment::constant(Point v) {
  Point copy = v;
  return Segment{SegmentKind::kConstant, std::move(v), std::move(copy)};
}

Segment Segment::linear(Point v0, Point v1) {
  return Segment{SegmentKind::kLinear, std::move(v0), std::move(v1)};
}

Trajectory::Trajectory(Point initial, std::vector<double> breakpoints,
                       std::vector<Segment> segments, Point tail)
    : initial_(std::move(initial)),
      breakpoints_(std::move(breakpoints)),
      segments_(std::move(segments)),
      tail_(std::move(tail)) {
  const std::size_t n = initial_.size();
  if (n == 0) throw DomainError("trajectory dimension must be positive");
  if (tail_.size() != n) throw DomainError("tail dimension mismatch");
  if (!all_finite(initial_) || !all_finite(tail_)) {
    throw DomainError("trajectory values must be finite");
  }
  if (breakpoints_.empty() || breakpoints_.front() != 0.0) {
    throw DomainError("breakpoints must start at t_0 = 0");
  }
  if (segments_.size() + 1 != breakpoints_.size()) {
    throw DomainError("expected one segment per breakpoint interval");
  }
  for (std::size_t j = 1; j < breakpoints_.size(); ++j) {
    if (!std::isfinite(breakpoints_[j]) || !(breakpoints_[j] > breakpoints_[j - 1])) {
      throw DomainError("breakpoints must be finite and strictly increasing");
    }
  }
  for (const Segment& s : segments_) {
    if (s.start.size() != n || s.end.size() != n) {
      throw DomainError("segment dimension mismatch");
    }
    if (!all_finite(s.start) || !all_finite(s.end)) {
      throw DomainError("trajectory values must be finite");
    }
    if (s.kind == SegmentKind::kConstant && s.start != s.end) {
      throw DomainError("constant segment with distinct endpoints");
    }
  }
}

Trajectory Trajectory::constant(Point v) {
  Point tail = v;
  return Trajectory(std::move(v), {0.0}, {}, std::move(tail));
}

std::size_t Trajectory::segment_containing(double t) const {
  // First breakpoint >= t; its predecessor opens the segment.
  auto it = std::lower_bound(breakpoints_.begin() + 1, breakpoints_.end(), t);
  return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

Point Trajectory::eval(double t) const {
  require_time(t);
  if (t == 0.0) return initial_;
  const std::size_t j = segment_containing(t);
  if (j >= segments_.size()) return tail_;
  const Segment& s = segments_[j];
  if (s.kind == SegmentKind::kConstant || t == breakpoints_[j + 1]) return s.end;
  const double w = (t - breakpoints_[j]) / (breakpoints_[j + 1] - breakpoints_[j]);
  return lerp(s.start, s.end, w);
}

double Trajectory::eval(double t, std::size_t k) const {
  require_time(t);
  if (t == 0.0) return initial_[k];
  const std::size_t j = segment_containing(t);
  if (j >= segments_.size()) return tail_[k];
  const Segment& s = segments_[j];
  if (s.kind == SegmentKind::kConstant || t == breakpoints_[j + 1]) return s.end[k];
  const double w = (t - breakpoints_[j]) / (breakpoints_[j + 1] - breakpoints_[j]);
  return lerp(s.start[k], s.end[k], w);
}

Point Trajectory::right_limit(double t) const {
  require_time(t);
  if (t >= last_breakpoint()) return tail_;
  // Segment j with t_j <= t < t_{j+1}.
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  const Segment& s = segments_[j];
  if (s.kind == SegmentKind::kConstant || t == breakpoints_[j]) return s.start;
  const double w = (t - breakpoints_[j]) / (breakpoints_[j + 1] - breakpoints_[j]);
  return lerp(s.start, s.end, w);
}

double Trajectory::right_limit(double t, std::size_t k) const {
  require_time(t);
  if (t >= last_breakpoint()) return tail_[k];
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  const Segment& s = segments_[j];
  if (s.kind == SegmentKind::kConstant || t == breakpoints_[j]) return s.start[k];
  const double w = (t - breakpoints_[j]) / (breakpoints_[j + 1] - breakpoints_[j]);
  return lerp(s.start[k], s.end[k], w);
}

TrajectoryBuilder::TrajectoryBuilder(Point initial) : initial_(std::move(initial)) {}

TrajectoryBuilder& TrajectoryBuilder::constant_until(double t, Point v) {
  breakpoints_.push_back(t);
  segments_.push_back(Segment::constant(std::move(v)));
  return *this;
}

TrajectoryBuilder& TrajectoryBuilder::linear_until(double t, Point v0, Point v1) {
  breakpoints_.push_back(t);
  segments_.push_back(Segment::linear(std::move(v0), std::move(v1)));
  return *this;
}

Trajectory TrajectoryBuilder::finish(Point tail) {
  return Trajectory(std::move(initial_), std::move(breakpoints_), std::move(segments_),
                    std::move(tail));
}

ExtendedTrajectory::ExtendedTrajectory(Trajectory base, double horizon)
    : base_(std::move(base)), horizon_(horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw DomainError("extension horizon must be positive and finite");
  }
}

void ExtendedTrajectory::check_range(double t) const {
  if (!(t >= -1.0 && t <= horizon_ + 1.0)) {
    throw DomainError("time outside the extension interval [-1, T + 1]");
  }
}

Point ExtendedTrajectory::eval(double t) const {
  check_range(t);
  if (t <= 0.0) return base_.initial_value();
  if (t >= horizon_) return base_.eval(horizon_);
  return base_.eval(t);
}

Point ExtendedTrajectory::right_limit(double t) const {
  check_range(t);
  if (t < 0.0) return base_.initial_value();
  if (t >= horizon_) return base_.eval(horizon_);
  return base_.right_limit(t);
}

ExtendedTrajectory extend(const Trajectory& phi, double horizon) {
  return ExtendedTrajectory(phi, horizon);
}

ScalarTrajectory project(const Trajectory& phi, std::size_t k) {
  if (k < 1 || k > phi.dim()) {
    throw DomainError("coordinate index " + std::to_string(k) + " outside 1.." +
                      std::to_string(phi.dim()));
  }
  const std::size_t i = k - 1;
  std::vector<Segment> segments;
  segments.reserve(phi.segments().size());
  for (const Segment& s : phi.segments()) {
    segments.push_back(Segment{s.kind, {s.start[i]}, {s.end[i]}});
  }
  return Trajectory({phi.initial_value()[i]}, phi.breakpoints(), std::move(segments),
                    {phi.tail()[i]});
}

std::vector<double> disc_set(const Trajectory& phi, double horizon) {
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  std::vector<double> out;
  const auto& bp = phi.breakpoints();
  const auto& segs = phi.segments();
  for (std::size_t j = 1; j < bp.size() && bp[j] <= horizon; ++j) {
    const Point& right = (j < segs.size()) ? segs[j].start : phi.tail();
    if (segs[j - 1].end != right) out.push_back(bp[j]);
  }
  return out;
}

Trajectory shift(const Trajectory& phi, double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("shift time must be positive");
  const auto& bp = phi.breakpoints();
  const auto& segs = phi.segments();
  Point initial = phi.eval(T);
  if (T >= phi.last_breakpoint()) return Trajectory(std::move(initial), {0.0}, {}, phi.tail());

  // First segment j with T < t_{j+1}.
  auto it = std::upper_bound(bp.begin(), bp.end(), T);
  std::size_t j = static_cast<std::size_t>(it - bp.begin()) - 1;
  std::vector<double> out_bp{0.0};
  std::vector<Segment> out_segs;
  out_bp.reserve(bp.size() - j);
  out_segs.reserve(segs.size() - j);
  for (std::size_t i = j; i < segs.size(); ++i) {
    out_bp.push_back(bp[i + 1] - T);
    out_segs.push_back(segs[i]);
  }
  if (T > bp[j] && segs[j].kind == SegmentKind::kLinear) {
    out_segs.front().start = phi.right_limit(T);
  }
  return Trajectory(std::move(initial), std::move(out_bp), std::move(out_segs), phi.tail());
}

Trajectory continue_at(const Trajectory& phi1, const Trajectory& phi2, double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("continuation time must be positive");
  if (phi1.dim() != phi2.dim()) throw DomainError("continuation of trajectories of different dimension");
  const auto& bp = phi1.breakpoints();
  const auto& segs = phi1.segments();
  std::vector<double> out_bp{0.0};
  std::vector<Segment> out_segs;

  for (std::size_t j = 0; j < segs.size() && bp[j] < T; ++j) {
    if (bp[j + 1] <= T) {
      out_bp.push_back(bp[j + 1]);
      out_segs.push_back(segs[j]);
    } else {
      out_bp.push_back(T);
      Segment cut = segs[j];
      if (cut.kind == SegmentKind::kLinear) cut.end = phi1.eval(T);
      out_segs.push_back(std::move(cut));
    }
  }
  if (out_bp.back() < T) {
    out_bp.push_back(T);
    out_segs.push_back(Segment::constant(phi1.tail()));
  }

  const auto& bp2 = phi2.breakpoints();
  const auto& segs2 = phi2.segments();
  for (std::size_t j = 0; j < segs2.size(); ++j) {
    out_bp.push_back(bp2[j + 1] + T);
    out_segs.push_back(segs2[j]);
  }
  return Trajectory(phi1.initial_value(), std::move(out_bp), std::move(out_segs), phi2.tail());
}

Trajectory normalized(const Trajectory& phi) {
  const auto& bp = phi.breakpoints();
  std::vector<double> out_bp{0.0};
  std::vector<Segment> out_segs;
  for (std::size_t j = 0; j < phi.segments().size(); ++j) {
    Segment s = phi.segments()[j];
    if (s.kind == SegmentKind::kLinear && s.start == s.end) s.kind = SegmentKind::kConstant;
    if (!out_segs.empty() && s.kind == SegmentKind::kConstant &&
        out_segs.back().kind == SegmentKind::kConstant && out_segs.back().end == s.start) {
      out_bp.back() = bp[j + 1];
      continue;
    }
    out_bp.push_back(bp[j + 1]);
    out_segs.push_back(std::move(s));
  }
  while (!out_segs.empty() && out_segs.back().kind == SegmentKind::kConstant &&
         out_segs.back().end == phi.tail()) {
    out_segs.pop_back();
    out_bp.pop_back();
  }
  return Trajectory(phi.initial_value(), std::move(out_bp), std::move(out_segs), phi.tail());
}

bool is_constant_on(const Trajectory& phi, double horizon) {
  const Point& v = phi.initial_value();
  const auto& bp = phi.breakpoints();
  const auto& segs = phi.segments();
  for (std::size_t j = 0; j < segs.size(); ++j) {
    if (bp[j] >= horizon) return true;
    if (segs[j].start != v) return false;
    // A linear piece leaves v as soon as it starts moving.
    if (segs[j].end != v) return false;
  }
  return phi.last_breakpoint() >= horizon || phi.tail() == v;
}

namespace {

// Values met in time order on [0, horizon].
std::vector<double> ordered_values(const ScalarTrajectory& phi, double horizon) {
  if (phi.dim() != 1) throw DomainError("monotonicity is defined for scalar trajectories");
  std::vector<double> out{phi.initial_value()[0]};
  const auto& bp = phi.breakpoints();
  const auto& segs = phi.segments();
  for (std::size_t j = 0; j < segs.size() && bp[j] < horizon; ++j) {
    out.push_back(segs[j].start[0]);
    out.push_back(bp[j + 1] <= horizon ? segs[j].end[0] : phi.eval(horizon, 0));
  }
  if (phi.last_breakpoint() < horizon) out.push_back(phi.tail()[0]);
  return out;
}

}  // namespace

bool is_nonincreasing(const ScalarTrajectory& phi, double horizon) {
  auto v = ordered_values(phi, horizon);
  return std::is_sorted(v.begin(), v.end(), std::greater<>());
}

bool is_nondecreasing(const ScalarTrajectory& phi, double horizon) {
  auto v = ordered_values(phi, horizon);
  return std::is_sorted(v.begin(), v.end());
}

}  // namespace semiflow
