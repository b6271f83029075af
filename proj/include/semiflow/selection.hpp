#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "semiflow/bundle.hpp"
#include "semiflow/errors.hpp"
#include "semiflow/skorokhod.hpp"
#include "semiflow/trajectory.hpp"

namespace semiflow {

/// Smooth, bounded, strictly increasing transform applied to a coordinate
/// before discounting. The argument is multiplied by `scale` first.
struct Envelope {
  enum class Kind { kTanh, kArctan };
  Kind kind = Kind::kTanh;
  double scale = 1.0;

  double operator()(double z) const;
  /// sup |f|.
  double bound() const { return 1.0; }
};

/// I(Phi) = int_0^inf exp(-lambda t) f(<Phi(t), e_k>) dt.
struct SelectionFunctional {
  double lambda = 1.0;
  std::size_t k = 1;  // one-based
  Envelope envelope;
  double quad_tol = 1e-9;
};

double eval_functional(const Trajectory& phi, const SelectionFunctional& functional);

/// Candidates whose functional value lies within tie_tol of the minimum,
/// in input order.
std::vector<Trajectory> argmin_reduce(const std::vector<Trajectory>& candidates,
                                      const SelectionFunctional& functional, double tie_tol);

/// j-th element (one-based) of the dyadic rationals in (0, inf): stage
/// s = 1, 2, ... lists p / 2^q with p + q = s, q ascending, keeping only
/// reduced fractions. Starts 1, 2, 1/2, 3, 1/4, 4, 3/2, 1/8, ...
double dyadic_lambda(std::size_t j);

/// i-th pair (one-based) of the Cantor diagonal over (j, k), restricted to
/// k <= dim: (1,1), (2,1), (1,2), (3,1), ...
std::pair<std::size_t, std::size_t> cantor_index(std::size_t i, std::size_t dim);

enum class SeedOrder {
  /// Smallest compact JSON serialization wins.
  kLexicographic,
  /// First in bundle order wins.
  kInput,
};

struct SelectionConfig {
  std::function<double(std::size_t)> lambda_at = dyadic_lambda;
  std::function<std::pair<std::size_t, std::size_t>(std::size_t, std::size_t)> index_at =
      cantor_index;
  Envelope envelope;
  double quad_tol = 1e-9;
  double tie_tol = 1e-8;
  std::size_t max_iters = 64;
  /// Survivors still tied at the budget are accepted when pairwise d_inf is
  /// at most this.
  double coincidence_tol = 1e-8;
  int truncation_N = 12;
  SkorokhodOptions metric;
  SeedOrder seed_order = SeedOrder::kLexicographic;
};

struct TraceRecord {
  std::size_t i = 0;
  double lambda = 0.0;
  std::size_t k = 0;
  std::size_t survivors = 0;
  double min_value = 0.0;
  bool operator==(const TraceRecord&) const = default;
};

struct SelectionResult {
  Trajectory selected;
  std::vector<TraceRecord> trace;
  /// Set when several coincident survivors remained and seed order decided.
  bool coincidence_fallback = false;
};

/// Survivors did not reduce to one and are not coincident.
class NonSingleton : public Error {
 public:
  NonSingleton(const std::string& what, std::vector<Trajectory> survivors)
      : Error(what), survivors_(std::move(survivors)) {}
  const std::vector<Trajectory>& survivors() const noexcept { return survivors_; }

 private:
  std::vector<Trajectory> survivors_;
};

/// Iterated argmin over the enumerated functionals, starting from the
/// candidates filed under x.
SelectionResult select(const Bundle& bundle, const Point& x, const SelectionConfig& config = {});

/// As select(), with I_{1, k_E} on the energy coordinate applied first.
SelectionResult energy_first_select(const Bundle& bundle, const Point& x,
                                    const SelectionConfig& config = {});

/// Reduction of an explicit candidate set. `first` is applied before the
/// enumeration when given.
SelectionResult select_among(const std::vector<Trajectory>& candidates,
                             const SelectionConfig& config,
                             std::optional<SelectionFunctional> first = std::nullopt);

using SelectFn = std::function<Trajectory(const Bundle&, const Point&)>;

struct SemigroupSample {
  double t2 = 0.0;
  double gap = 0.0;
  bool ok = false;
};

struct SemigroupVerdict {
  double t1 = 0.0;
  bool holds = true;
  std::vector<SemigroupSample> samples;
};

/// u(x)(t1 + t2) against u(u(x)(t1))(t2) for every t2. Throws
/// UnknownInitialPoint when u(x)(t1) is not a key of the bundle.
SemigroupVerdict semigroup_check(const SelectFn& select_fn, const Bundle& bundle, const Point& x,
                                 double t1, const std::vector<double>& t2_grid, double tol);

}  // namespace semiflow
