#include "semiflow/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "semiflow/io.hpp"

namespace semiflow {

double Envelope::operator()(double z) const {
  const double x = scale * z;
  switch (kind) {
    case Kind::kArctan:
      return 2.0 / std::numbers::pi * std::atan(x);
    case Kind::kTanh:
    default:
      return std::tanh(x);
  }
}

namespace {

// int_a^b exp(-lambda t) dt without cancellation.
double discount_mass(double lambda, double a, double b) {
  return std::exp(-lambda * a) * -std::expm1(-lambda * (b - a)) / lambda;
}

}  // namespace

double eval_functional(const Trajectory& phi, const SelectionFunctional& functional) {
  const double lambda = functional.lambda;
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("decay rate must be positive");
  if (functional.k < 1 || functional.k > phi.dim()) throw DomainError("coordinate index out of range");
  const std::size_t c = functional.k - 1;
  const Envelope& f = functional.envelope;
  const auto& bp = phi.breakpoints();
  const auto& segs = phi.segments();

  double total = 0.0;
  for (std::size_t j = 0; j < segs.size(); ++j) {
    const double a = bp[j];
    const double b = bp[j + 1];
    const Segment& s = segs[j];
    if (s.kind == SegmentKind::kConstant) {
      total += f(s.start[c]) * discount_mass(lambda, a, b);
      continue;
    }
    const double v0 = s.start[c];
    const double v1 = s.end[c];
    const double width = b - a;
    // Factor exp(-lambda a) out so that late segments keep relative accuracy.
    auto integrand = [&](double u) {
      return std::exp(-lambda * u) * f(v0 + (v1 - v0) * (u / width));
    };
    double error = 0.0;
    double l1 = 0.0;
    const double piece = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, 0.0, width, 15, functional.quad_tol, &error, &l1);
    if (error > functional.quad_tol * l1 && error > 1e-300) {
      throw QuadratureError("adaptive quadrature did not reach the requested tolerance",
                            total + std::exp(-lambda * a) * piece, std::exp(-lambda * a) * error);
    }
    total += std::exp(-lambda * a) * piece;
  }
  total += f(phi.tail()[c]) * std::exp(-lambda * phi.last_breakpoint()) / lambda;
  return total;
}

namespace {

struct Reduction {
  std::vector<std::size_t> kept;
  double min_value = 0.0;
};

Reduction reduce_indices(const std::vector<Trajectory>& candidates,
                         const SelectionFunctional& functional, double tie_tol) {
  if (candidates.empty()) throw DomainError("argmin over an empty candidate set");
  if (!(tie_tol >= 0.0)) throw DomainError("tie tolerance must be non-negative");
  std::vector<double> values;
  values.reserve(candidates.size());
  for (const auto& phi : candidates) values.push_back(eval_functional(phi, functional));
  Reduction out;
  out.min_value = *std::min_element(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= out.min_value + tie_tol) out.kept.push_back(i);
  }
  return out;
}

}  // namespace

std::vector<Trajectory> argmin_reduce(const std::vector<Trajectory>& candidates,
                                      const SelectionFunctional& functional, double tie_tol) {
  const Reduction r = reduce_indices(candidates, functional, tie_tol);
  std::vector<Trajectory> out;
  out.reserve(r.kept.size());
  for (std::size_t i : r.kept) out.push_back(candidates[i]);
  return out;
}

double dyadic_lambda(std::size_t j) {
  if (j == 0) throw DomainError("lambda enumeration is one-based");
  std::size_t seen = 0;
  for (std::size_t stage = 1;; ++stage) {
    for (std::size_t q = 0; q < stage; ++q) {
      const std::size_t p = stage - q;
      if (q > 0 && p % 2 == 0) continue;
      if (++seen == j) return std::ldexp(static_cast<double>(p), -static_cast<int>(q));
    }
  }
}

std::pair<std::size_t, std::size_t> cantor_index(std::size_t i, std::size_t dim) {
  if (i == 0) throw DomainError("functional enumeration is one-based");
  if (dim == 0) throw DomainError("dimension must be positive");
  std::size_t seen = 0;
  for (std::size_t diag = 2;; ++diag) {
    for (std::size_t k = 1; k < diag && k <= dim; ++k) {
      if (++seen == i) return {diag - k, k};
    }
  }
}

namespace {

std::size_t seed_winner(const std::vector<Trajectory>& survivors, SeedOrder order) {
  if (order == SeedOrder::kInput) return 0;
  std::size_t best = 0;
  std::string best_text = io::dump(io::to_json(survivors[0]));
  for (std::size_t i = 1; i < survivors.size(); ++i) {
    std::string text = io::dump(io::to_json(survivors[i]));
    if (text < best_text) {
      best = i;
      best_text = std::move(text);
    }
  }
  return best;
}

}  // namespace

SelectionResult select_among(const std::vector<Trajectory>& candidates,
                             const SelectionConfig& config,
                             std::optional<SelectionFunctional> first) {
  if (candidates.empty()) throw DomainError("selection from an empty candidate set");
  if (config.max_iters == 0) throw DomainError("max_iters must be positive");
  const std::size_t dim = candidates.front().dim();
  std::vector<Trajectory> survivors = candidates;
  std::vector<TraceRecord> trace;

  std::size_t enumerated = 0;
  for (std::size_t i = 1; i <= config.max_iters; ++i) {
    SelectionFunctional functional;
    functional.envelope = config.envelope;
    functional.quad_tol = config.quad_tol;
    if (i == 1 && first) {
      functional = *first;
    } else {
      const auto [j, k] = config.index_at(++enumerated, dim);
      functional.lambda = config.lambda_at(j);
      functional.k = k;
    }
    const Reduction r = reduce_indices(survivors, functional, config.tie_tol);
    std::vector<Trajectory> kept;
    kept.reserve(r.kept.size());
    for (std::size_t idx : r.kept) kept.push_back(std::move(survivors[idx]));
    survivors = std::move(kept);
    trace.push_back({i, functional.lambda, functional.k, survivors.size(), r.min_value});
    if (survivors.size() == 1) return {std::move(survivors.front()), std::move(trace), false};
  }

  for (std::size_t a = 0; a < survivors.size(); ++a) {
    for (std::size_t b = a + 1; b < survivors.size(); ++b) {
      const double d = d_inf(survivors[a], survivors[b], config.truncation_N, config.metric).value;
      if (d > config.coincidence_tol) {
        throw NonSingleton("selection left " + std::to_string(survivors.size()) +
                               " distinct survivors after " + std::to_string(config.max_iters) +
                               " reductions",
                           std::move(survivors));
      }
    }
  }
  const std::size_t winner = seed_winner(survivors, config.seed_order);
  return {std::move(survivors[winner]), std::move(trace), true};
}

SelectionResult select(const Bundle& bundle, const Point& x, const SelectionConfig& config) {
  return select_among(bundle.at(x), config);
}

SelectionResult energy_first_select(const Bundle& bundle, const Point& x,
                                    const SelectionConfig& config) {
  if (!bundle.energy_index()) {
    throw MissingEnergyCoordinate("bundle does not declare an energy coordinate");
  }
  SelectionFunctional first;
  first.lambda = 1.0;
  first.k = *bundle.energy_index();
  first.envelope = config.envelope;
  first.quad_tol = config.quad_tol;
  return select_among(bundle.at(x), config, first);
}

SemigroupVerdict semigroup_check(const SelectFn& select_fn, const Bundle& bundle, const Point& x,
                                 double t1, const std::vector<double>& t2_grid, double tol) {
  if (!(t1 >= 0.0)) throw DomainError("t1 must be non-negative");
  const Trajectory phi = select_fn(bundle, x);
  const Point y = phi.eval(t1);
  if (bundle.find(y) == nullptr) {
    throw UnknownInitialPoint("selected trajectory leaves the key set at t1 = " + std::to_string(t1), y);
  }
  const Trajectory psi = select_fn(bundle, y);
  SemigroupVerdict verdict;
  verdict.t1 = t1;
  for (double t2 : t2_grid) {
    if (!(t2 >= 0.0)) throw DomainError("t2 must be non-negative");
    const Point a = phi.eval(t1 + t2);
    const Point b = psi.eval(t2);
    double gap = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
    const bool ok = gap <= tol;
    verdict.holds = verdict.holds && ok;
    verdict.samples.push_back({t2, gap, ok});
  }
  return verdict;
}

}  // namespace semiflow
