#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

using semiflow::ScalarTrajectory;
using semiflow::Trajectory;

std::vector<Vertex> completed_graph(const ScalarTrajectory& phi, double M) {
  std::vector<Vertex> out;
  const double x0 = phi.eval(0.0, 0);
  out.push_back({-1.0, x0});
  out.push_back({0.0, x0});
  out.push_back({0.0, phi.right_limit(0.0, 0)});
  for (double t : phi.breakpoints()) {
    if (t <= 0.0 || t >= M) continue;
    out.push_back({t, phi.eval(t, 0)});
    out.push_back({t, phi.right_limit(t, 0)});
  }
  const double xM = phi.eval(M, 0);
  out.push_back({M, xM});
  out.push_back({M + 1.0, xM});
  return out;
}

namespace {

double gap(const Vertex& a, const Vertex& b) { return std::max(std::abs(a.t - b.t), std::abs(a.v - b.v)); }

std::vector<Vertex> densify(const std::vector<Vertex>& poly, int per_edge, double& spacing) {
  std::vector<Vertex> out;
  for (std::size_t e = 0; e + 1 < poly.size(); ++e) {
    for (int r = 0; r < per_edge; ++r) {
      const double w = static_cast<double>(r) / per_edge;
      out.push_back({poly[e].t + w * (poly[e + 1].t - poly[e].t), poly[e].v + w * (poly[e + 1].v - poly[e].v)});
    }
    spacing = std::max(spacing, gap(poly[e], poly[e + 1]) / per_edge);
  }
  out.push_back(poly.back());
  return out;
}

// Explicit memo over (i, j): cost of the cheapest monotone coupling of the
// prefixes ending at the pair (i, j).
double coupling_cost(const std::vector<Vertex>& p, const std::vector<Vertex>& q) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> c(p.size(), std::vector<double>(q.size(), inf));
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      double best = (i == 0 && j == 0) ? 0.0 : inf;
      if (i > 0) best = std::min(best, c[i - 1][j]);
      if (j > 0) best = std::min(best, c[i][j - 1]);
      if (i > 0 && j > 0) best = std::min(best, c[i - 1][j - 1]);
      c[i][j] = std::max(best, gap(p[i], q[j]));
    }
  }
  return c.back().back();
}

}  // namespace

Bracket matching_bracket(const ScalarTrajectory& phi, const ScalarTrajectory& psi, double M,
                         int per_edge) {
  double spacing = 0.0;
  const auto p = densify(completed_graph(phi, M), per_edge, spacing);
  const auto q = densify(completed_graph(psi, M), per_edge, spacing);
  const double v = std::max(coupling_cost(p, q), coupling_cost(q, p));
  return {v - spacing, v};
}

double sup_gap(const ScalarTrajectory& phi, const ScalarTrajectory& psi, double M) {
  std::vector<double> times;
  for (int i = 0; i <= 4000; ++i) times.push_back(M * i / 4000.0);
  for (double t : phi.breakpoints()) times.push_back(t);
  for (double t : psi.breakpoints()) times.push_back(t);
  double worst = std::abs(phi.eval(0.0, 0) - psi.eval(0.0, 0));
  for (double t : times) {
    if (t > M) continue;
    worst = std::max(worst, std::abs(phi.eval(t, 0) - psi.eval(t, 0)));
    if (t < M) worst = std::max(worst, std::abs(phi.right_limit(t, 0) - psi.right_limit(t, 0)));
  }
  return worst;
}

double laplace_integral(const Trajectory& phi, std::size_t k, double lambda,
                        const std::function<double(double)>& f, int panels) {
  const auto& bp = phi.breakpoints();
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
    const double a = bp[j];
    const double b = bp[j + 1];
    const double h = (b - a) / (2 * panels);
    // Interior evaluation avoids the breakpoint values; the endpoint
    // samples use the one-sided limits of the segment.
    auto g = [&](int idx) {
      const double t = a + idx * h;
      double x;
      if (idx == 0) {
        x = phi.right_limit(a, k - 1);
      } else if (idx == 2 * panels) {
        x = phi.eval(b, k - 1);
      } else {
        x = phi.eval(t, k - 1);
      }
      return std::exp(-lambda * t) * f(x);
    };
    double s = g(0) + g(2 * panels);
    for (int i = 1; i < 2 * panels; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * g(i);
    total += s * h / 3.0;
  }
  total += f(phi.tail()[k - 1]) * std::exp(-lambda * bp.back()) / lambda;
  return total;
}

double tail_mass(int N) {
  double s = 0.0;
  for (int m = N + 1; m <= 60; ++m) s += (m - 1) * std::ldexp(1.0, -m);
  return s;
}

double integrate_power_ode(double alpha, double c, double t0, double x0, double t1, int n) {
  auto rhs = [&](double x) { return c * std::pow(std::max(x, 0.0), alpha); };
  const double h = (t1 - t0) / n;
  double x = x0;
  for (int i = 0; i < n; ++i) {
    const double k1 = rhs(x);
    const double k2 = rhs(x + 0.5 * h * k1);
    const double k3 = rhs(x + 0.5 * h * k2);
    const double k4 = rhs(x + h * k3);
    x += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return x;
}

double weighted_sum(int N, std::size_t dim, const std::function<double(int, std::size_t)>& dM) {
  double s = 0.0;
  for (int M = 1; M < N; ++M) {
    for (std::size_t k = 1; k <= dim && static_cast<int>(k) + M <= N; ++k) {
      const double d = dM(M, k);
      s += std::ldexp(1.0, -(M + static_cast<int>(k))) * d / (1.0 + d);
    }
  }
  return s;
}

}  // namespace oracle
