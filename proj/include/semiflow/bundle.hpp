#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semiflow/skorokhod.hpp"
#include "semiflow/trajectory.hpp"

namespace semiflow {

/// Default coordinate quantization step, 2^-20.
inline constexpr double kDefaultQuantum = 1.0 / 1048576.0;

/// Finite set-valued map from quantized initial states to non-empty sets of
/// trajectories starting there.
///
/// Keys live on the lattice quantum * Z^n. A trajectory is filed under the
/// lattice point nearest to its value at t = 0. An optional observation
/// `horizon` identifies a trajectory that stays at its initial state on
/// [0, horizon] with the constant trajectory (see canonical()).
class Bundle {
 public:
  using LatticeKey = std::vector<std::int64_t>;

  struct Entry {
    Point key;
    std::vector<Trajectory> trajectories;
  };

  Bundle(std::size_t dim, double quantum = kDefaultQuantum, std::vector<double> time_grid = {},
         std::optional<std::size_t> energy_index = std::nullopt,
         std::optional<double> horizon = std::nullopt);

  std::size_t dim() const noexcept { return dim_; }
  double quantum() const noexcept { return quantum_; }
  const std::vector<double>& time_grid() const noexcept { return time_grid_; }
  /// One-based coordinate of the energy, when declared.
  std::optional<std::size_t> energy_index() const noexcept { return energy_index_; }
  std::optional<double> horizon() const noexcept { return horizon_; }

  LatticeKey quantize(const Point& x) const;
  Point key_point(const LatticeKey& key) const;

  /// Files `phi` under the key of phi(0). Returns false when an equal
  /// trajectory is already there.
  bool insert(Trajectory phi);
  /// Drops one trajectory; an emptied key disappears. Returns false if absent.
  bool erase(const Trajectory& phi);

  /// Trajectories filed under the key of x, or nullptr.
  const std::vector<Trajectory>* find(const Point& x) const;
  /// As find(), throwing UnknownInitialPoint when x is not a key.
  const std::vector<Trajectory>& at(const Point& x) const;

  /// Entries in lattice order.
  std::vector<Entry> entries() const;
  std::size_t key_count() const noexcept { return entries_.size(); }
  std::size_t trajectory_count() const noexcept;

  /// normalized(phi), replaced by the constant at phi(0) when phi does not
  /// move before the observation horizon.
  Trajectory canonical(const Trajectory& phi) const;

  bool operator==(const Bundle&) const = default;

 private:
  std::size_t dim_;
  double quantum_;
  std::vector<double> time_grid_;
  std::optional<std::size_t> energy_index_;
  std::optional<double> horizon_;
  std::map<LatticeKey, std::vector<Trajectory>> entries_;
};

struct Violation {
  std::string property;  // "P4" or "P5"
  Point key;
  double T = 0.0;
  /// Distance to the nearest admissible trajectory; empty when the target
  /// state is not a key at all.
  std::optional<double> distance;
};

struct VerifyOptions {
  double tol = 0.0;
  int truncation_N = 12;
  SkorokhodOptions metric;
};

/// Shift invariance on the time grid: S_T Phi must belong to U(Phi(T)).
std::vector<Violation> verify_P4(const Bundle& bundle, const VerifyOptions& opts = {});

/// Continuation on the time grid: Phi1 u_T Phi2 must belong to U(x) for
/// every Phi2 in U(Phi1(T)).
std::vector<Violation> verify_P5(const Bundle& bundle, const VerifyOptions& opts = {});

struct ClosureOptions {
  std::size_t max_trajectories = 100000;
};

struct ClosureResult {
  Bundle bundle;
  /// False when the size budget stopped the iteration before a fixed point.
  bool complete = true;
};

/// Adds shifts and continuations on the time grid until nothing new appears.
/// Every stored trajectory is in canonical form.
ClosureResult generate_closure(const Bundle& bundle, const ClosureOptions& opts = {});

}  // namespace semiflow
