#include "semiflow/skorokhod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "semiflow/errors.hpp"

namespace semiflow {

namespace {

void require_scalar(const ScalarTrajectory& phi) {
  if (phi.dim() != 1) throw DomainError("scalar trajectory expected, got dim " + std::to_string(phi.dim()));
}

double chebyshev(const GraphVertex& a, const GraphVertex& b) {
  return std::max(std::abs(a.time - b.time), std::abs(a.value - b.value));
}

// Closed sub-interval of [0, 1]; empty when lo > hi.
struct Interval {
  double lo = 1.0;
  double hi = 0.0;
  bool empty() const { return lo > hi; }
  static Interval none() { return {}; }
};

// {u in [0, 1] : |a + u d| <= eps}
Interval band(double a, double d, double eps) {
  if (d == 0.0) return std::abs(a) <= eps ? Interval{0.0, 1.0} : Interval::none();
  double u0 = (-eps - a) / d;
  double u1 = (eps - a) / d;
  if (u0 > u1) std::swap(u0, u1);
  return {std::max(u0, 0.0), std::min(u1, 1.0)};
}

// Parameters u where the edge from -> to stays within eps of `c` in sup norm.
Interval free_interval(const GraphVertex& from, const GraphVertex& to, const GraphVertex& c,
                       double eps) {
  Interval t = band(from.time - c.time, to.time - from.time, eps);
  Interval v = band(from.value - c.value, to.value - from.value, eps);
  return {std::max(t.lo, v.lo), std::min(t.hi, v.hi)};
}

// Decision procedure on the free-space diagram: is there a monotone
// matching of the two polylines with sup-norm cost <= eps? Cells are
// convex, so reachability propagates through cell boundaries only.
bool frechet_within(const std::vector<GraphVertex>& p, const std::vector<GraphVertex>& q,
                    double eps) {
  const std::size_t n = p.size() - 1;
  const std::size_t m = q.size() - 1;
  if (chebyshev(p.front(), q.front()) > eps || chebyshev(p.back(), q.back()) > eps) return false;

  // Reachable part of the vertical edges at the current column of P.
  std::vector<Interval> left(m);
  bool open = true;
  for (std::size_t j = 0; j < m; ++j) {
    Interval f = free_interval(q[j], q[j + 1], p[0], eps);
    if (open && !f.empty() && f.lo == 0.0) {
      left[j] = f;
      open = f.hi == 1.0;
    } else {
      left[j] = Interval::none();
      open = false;
    }
  }

  bool bottom_open = true;
  std::vector<Interval> next(m);
  for (std::size_t i = 0; i < n; ++i) {
    // Bottom edge of the first cell row.
    Interval bottom = Interval::none();
    {
      Interval f = free_interval(p[i], p[i + 1], q[0], eps);
      if (bottom_open && !f.empty() && f.lo == 0.0) {
        bottom = f;
        bottom_open = f.hi == 1.0;
      } else {
        bottom_open = false;
      }
    }
    for (std::size_t j = 0; j < m; ++j) {
      const Interval& l = left[j];
      Interval right = Interval::none();
      Interval top = Interval::none();
      if (!bottom.empty() || !l.empty()) {
        Interval rf = free_interval(q[j], q[j + 1], p[i + 1], eps);
        if (!bottom.empty()) {
          right = rf;
        } else {
          right = {std::max(rf.lo, l.lo), rf.hi};
        }
        Interval tf = free_interval(p[i], p[i + 1], q[j + 1], eps);
        if (!l.empty()) {
          top = tf;
        } else {
          top = {std::max(tf.lo, bottom.lo), tf.hi};
        }
      }
      next[j] = right;
      bottom = top;
    }
    std::swap(left, next);
    if (i + 1 == n) {
      return (!left[m - 1].empty() && left[m - 1].hi == 1.0) || (!bottom.empty() && bottom.hi == 1.0);
    }
  }
  return false;
}

std::vector<GraphVertex> as_polyline(const CompletedGraph& g) {
  std::vector<GraphVertex> v = g.vertices;
  if (v.size() == 1) v.push_back(v.front());
  return v;
}

DistanceBracket free_space_distance(const std::vector<GraphVertex>& p,
                                    const std::vector<GraphVertex>& q,
                                    const SkorokhodOptions& opts) {
  double lo = std::max(chebyshev(p.front(), q.front()), chebyshev(p.back(), q.back()));
  if (frechet_within(p, q, lo)) return {lo, lo, lo};
  double hi = lo;
  for (const auto& a : p) {
    for (const auto& b : q) hi = std::max(hi, chebyshev(a, b));
  }
  for (int it = 0; it < opts.max_bisections; ++it) {
    if (hi - lo <= opts.tol) return {hi, lo, hi};
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return {hi, lo, hi};
    if (frechet_within(p, q, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  if (hi - lo <= opts.tol) return {hi, lo, hi};
  throw MetricError("free-space bisection did not reach tolerance", lo, hi);
}

std::vector<GraphVertex> sample(const std::vector<GraphVertex>& poly, int per_edge, double& max_gap) {
  std::vector<GraphVertex> out;
  out.reserve((poly.size() - 1) * static_cast<std::size_t>(per_edge) + 1);
  for (std::size_t e = 0; e + 1 < poly.size(); ++e) {
    const auto& a = poly[e];
    const auto& b = poly[e + 1];
    for (int r = 0; r < per_edge; ++r) {
      const double w = static_cast<double>(r) / per_edge;
      out.push_back({a.time + (b.time - a.time) * w, a.value + (b.value - a.value) * w});
    }
    max_gap = std::max(max_gap, chebyshev(a, b) / per_edge);
  }
  out.push_back(poly.back());
  return out;
}

// Discrete Fréchet distance over monotone couplings of sampled points.
double discrete_frechet(const std::vector<GraphVertex>& p, const std::vector<GraphVertex>& q) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(q.size(), inf);
  std::vector<double> cur(q.size(), inf);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      double reach;
      if (i == 0 && j == 0) {
        reach = 0.0;
      } else {
        reach = inf;
        if (i > 0) reach = std::min(reach, prev[j]);
        if (j > 0) reach = std::min(reach, cur[j - 1]);
        if (i > 0 && j > 0) reach = std::min(reach, prev[j - 1]);
      }
      cur[j] = std::max(reach, chebyshev(p[i], q[j]));
    }
    std::swap(prev, cur);
  }
  return prev.back();
}

DistanceBracket sampled_distance(const std::vector<GraphVertex>& p,
                                 const std::vector<GraphVertex>& q,
                                 const SkorokhodOptions& opts) {
  if (opts.resolution < 2) throw DomainError("sampling resolution must be at least 2");
  const double endpoint = std::max(chebyshev(p.front(), q.front()), chebyshev(p.back(), q.back()));
  std::optional<double> previous;
  DistanceBracket best;
  int res = opts.resolution;
  for (int round = 0; round <= opts.max_doublings; ++round, res *= 2) {
    double gap = 0.0;
    const auto ps = sample(p, res, gap);
    const auto qs = sample(q, res, gap);
    const double v = discrete_frechet(ps, qs);
    best = {v, std::max(endpoint, v - gap), v};
    if (previous && std::abs(*previous - v) < opts.tol) return best;
    if (best.upper - best.lower < opts.tol) return best;
    previous = v;
  }
  throw MetricError("sampled matching did not converge within the doubling budget", best.lower,
                    best.upper);
}

DistanceBracket one_sided(const std::vector<GraphVertex>& p, const std::vector<GraphVertex>& q,
                          const SkorokhodOptions& opts) {
  if (opts.kernel == MatchingKernel::kSampled) return sampled_distance(p, q, opts);
  return free_space_distance(p, q, opts);
}

}  // namespace

CompletedGraph completed_graph(const ScalarTrajectory& phi, double horizon) {
  require_scalar(phi);
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be positive");
  std::vector<GraphVertex> raw;
  const double v0 = phi.initial_value()[0];
  raw.push_back({-1.0, v0});
  raw.push_back({0.0, v0});
  raw.push_back({0.0, phi.right_limit(0.0, 0)});
  const auto& bp = phi.breakpoints();
  for (std::size_t j = 1; j < bp.size() && bp[j] < horizon; ++j) {
    raw.push_back({bp[j], phi.eval(bp[j], 0)});
    raw.push_back({bp[j], phi.right_limit(bp[j], 0)});
  }
  const double vm = phi.eval(horizon, 0);
  raw.push_back({horizon, vm});
  raw.push_back({horizon + 1.0, vm});

  CompletedGraph g;
  for (const auto& v : raw) {
    if (!g.vertices.empty() && g.vertices.back() == v) continue;
    const std::size_t s = g.vertices.size();
    if (s >= 2 && g.vertices[s - 1].value == v.value && g.vertices[s - 2].value == v.value) {
      g.vertices.back() = v;
      continue;
    }
    g.vertices.push_back(v);
  }
  return g;
}

DistanceBracket graph_distance(const CompletedGraph& a, const CompletedGraph& b,
                               const SkorokhodOptions& opts) {
  if (a.vertices.empty() || b.vertices.empty()) throw DomainError("empty completed graph");
  if (a.vertices == b.vertices) return {0.0, 0.0, 0.0};
  const auto p = as_polyline(a);
  const auto q = as_polyline(b);
  const DistanceBracket ab = one_sided(p, q, opts);
  const DistanceBracket ba = one_sided(q, p, opts);
  DistanceBracket out;
  out.value = std::max(ab.value, ba.value);
  out.upper = std::max(ab.upper, ba.upper);
  out.lower = std::min(std::max(ab.lower, ba.lower), out.upper);
  return out;
}

DistanceBracket d_M_bracket(const ScalarTrajectory& phi, const ScalarTrajectory& psi,
                            double horizon, const SkorokhodOptions& opts) {
  return graph_distance(completed_graph(phi, horizon), completed_graph(psi, horizon), opts);
}

double d_M(const ScalarTrajectory& phi, const ScalarTrajectory& psi, double horizon,
           const SkorokhodOptions& opts) {
  return d_M_bracket(phi, psi, horizon, opts).value;
}

double sup_distance(const ScalarTrajectory& phi, const ScalarTrajectory& psi, double horizon) {
  require_scalar(phi);
  require_scalar(psi);
  std::vector<double> times{0.0, horizon};
  for (double t : phi.breakpoints()) {
    if (t > 0.0 && t < horizon) times.push_back(t);
  }
  for (double t : psi.breakpoints()) {
    if (t > 0.0 && t < horizon) times.push_back(t);
  }
  std::sort(times.begin(), times.end());
  double best = 0.0;
  for (double t : times) {
    best = std::max(best, std::abs(phi.eval(t, 0) - psi.eval(t, 0)));
    if (t < horizon) best = std::max(best, std::abs(phi.right_limit(t, 0) - psi.right_limit(t, 0)));
  }
  return best;
}

double truncation_tail_bound(int N) { return (N + 1) * std::ldexp(1.0, -N); }

MetricReport d_inf(const Trajectory& phi, const Trajectory& psi, int N,
                   const SkorokhodOptions& opts) {
  if (phi.dim() != psi.dim()) throw DomainError("d_inf of trajectories of different dimension");
  if (N < 2) throw DomainError("truncation level N must be at least 2");
  MetricReport report;
  report.truncation_N = N;
  report.tail_bound = truncation_tail_bound(N);
  const int kmax = static_cast<int>(std::min<std::size_t>(phi.dim(), static_cast<std::size_t>(N - 1)));
  std::vector<ScalarTrajectory> pa;
  std::vector<ScalarTrajectory> pb;
  for (int k = 1; k <= kmax; ++k) {
    pa.push_back(project(phi, static_cast<std::size_t>(k)));
    pb.push_back(project(psi, static_cast<std::size_t>(k)));
  }
  for (int M = 1; M < N; ++M) {
    for (int k = 1; k <= kmax && M + k <= N; ++k) {
      const double d = d_M(pa[k - 1], pb[k - 1], M, opts);
      report.terms.push_back({M, k, d});
      report.value += std::ldexp(1.0, -(M + k)) * d / (1.0 + d);
    }
  }
  return report;
}

bool TailCriterion::accepts(const std::vector<double>& errors) const {
  const std::size_t w = std::min(window, errors.size());
  return std::all_of(errors.end() - static_cast<std::ptrdiff_t>(w), errors.end(),
                     [this](double e) { return e <= tol; });
}

PointwiseReport check_convergence_ae(const std::vector<Trajectory>& sequence,
                                     const Trajectory& limit, std::size_t k,
                                     const std::vector<double>& sample_grid,
                                     const TailCriterion& criterion) {
  if (k < 1 || k > limit.dim()) throw DomainError("coordinate index out of range");
  for (const auto& member : sequence) {
    if (member.dim() != limit.dim()) throw DomainError("sequence member of different dimension");
  }
  PointwiseReport report;
  if (sample_grid.empty()) return report;
  const double horizon = *std::max_element(sample_grid.begin(), sample_grid.end());
  const auto jumps = horizon > 0.0 ? disc_set(limit, horizon) : std::vector<double>{};
  const std::size_t c = k - 1;
  for (double t : sample_grid) {
    if (std::binary_search(jumps.begin(), jumps.end(), t)) {
      report.skipped.push_back(t);
      continue;
    }
    const double target = limit.eval(t, c);
    std::vector<double> errors;
    errors.reserve(sequence.size());
    for (const auto& member : sequence) errors.push_back(std::abs(member.eval(t, c) - target));
    report.checked.push_back(t);
    if (!criterion.accepts(errors)) report.exceptional.push_back(t);
  }
  return report;
}

EquivalenceReport check_monotone_equiv(const std::vector<ScalarTrajectory>& sequence,
                                       const ScalarTrajectory& limit, double horizon,
                                       const TailCriterion& criterion,
                                       const SkorokhodOptions& opts) {
  require_scalar(limit);
  for (const auto& member : sequence) {
    require_scalar(member);
    if (!is_nonincreasing(member, horizon) && !is_nondecreasing(member, horizon)) {
      throw DomainError("check_monotone_equiv: sequence member is not monotone");
    }
  }
  constexpr int kSamples = 256;
  std::vector<double> grid;
  for (int i = 1; i <= kSamples; ++i) grid.push_back(horizon * i / kSamples);

  EquivalenceReport report;
  report.pointwise = check_convergence_ae(sequence, limit, 1, grid, criterion);
  report.pointwise_converges = report.pointwise.exceptional.empty();
  for (const auto& member : sequence) report.distances.push_back(d_M(member, limit, horizon, opts));
  report.skorokhod_converges = criterion.accepts(report.distances);
  return report;
}

EquivalenceReport check_continuous_uniform(const std::vector<Trajectory>& sequence,
                                           const Trajectory& limit, double horizon,
                                           std::size_t k, const TailCriterion& criterion,
                                           const SkorokhodOptions& opts) {
  for (const auto& member : sequence) {
    if (member.dim() != limit.dim()) throw DomainError("sequence member of different dimension");
    if (!disc_set(member, horizon).empty()) {
      throw DomainError("check_continuous_uniform: sequence member jumps in (0, M]");
    }
  }
  const auto target = project(limit, k);
  EquivalenceReport report;
  for (const auto& member : sequence) {
    const auto proj = project(member, k);
    report.sup_gaps.push_back(sup_distance(proj, target, horizon));
    report.distances.push_back(d_M(proj, target, horizon, opts));
  }
  report.pointwise_converges = criterion.accepts(report.sup_gaps);
  report.skorokhod_converges = criterion.accepts(report.distances);
  return report;
}

}  // namespace semiflow
