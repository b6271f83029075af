#include "semiflow/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "semiflow/errors.hpp"

namespace semiflow {

Bundle::Bundle(std::size_t dim, double quantum, std::vector<double> time_grid,
               std::optional<std::size_t> energy_index, std::optional<double> horizon)
    : dim_(dim),
      quantum_(quantum),
      time_grid_(std::move(time_grid)),
      energy_index_(energy_index),
      horizon_(horizon) {
  if (dim_ == 0) throw DomainError("bundle dimension must be positive");
  if (!(quantum_ > 0.0) || !std::isfinite(quantum_)) throw DomainError("quantum must be positive");
  for (std::size_t i = 0; i < time_grid_.size(); ++i) {
    if (!(time_grid_[i] > 0.0) || !std::isfinite(time_grid_[i]) ||
        (i > 0 && !(time_grid_[i] > time_grid_[i - 1]))) {
      throw DomainError("time grid must be positive and strictly increasing");
    }
  }
  if (energy_index_ && (*energy_index_ < 1 || *energy_index_ > dim_)) {
    throw DomainError("energy index outside 1..dim");
  }
  if (horizon_ && (!(*horizon_ > 0.0) || !std::isfinite(*horizon_))) {
    throw DomainError("observation horizon must be positive");
  }
}

Bundle::LatticeKey Bundle::quantize(const Point& x) const {
  if (x.size() != dim_) throw DomainError("point dimension does not match the bundle");
  LatticeKey key(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    const double q = std::nearbyint(x[i] / quantum_);
    if (!std::isfinite(q) || std::abs(q) > 9.0e18) throw DomainError("point outside the key lattice");
    key[i] = static_cast<std::int64_t>(q);
  }
  return key;
}

Point Bundle::key_point(const LatticeKey& key) const {
  Point p(key.size());
  for (std::size_t i = 0; i < key.size(); ++i) p[i] = static_cast<double>(key[i]) * quantum_;
  return p;
}

bool Bundle::insert(Trajectory phi) {
  if (phi.dim() != dim_) throw DomainError("trajectory dimension does not match the bundle");
  auto& slot = entries_[quantize(phi.initial_value())];
  if (std::find(slot.begin(), slot.end(), phi) != slot.end()) return false;
  slot.push_back(std::move(phi));
  return true;
}

bool Bundle::erase(const Trajectory& phi) {
  auto it = entries_.find(quantize(phi.initial_value()));
  if (it == entries_.end()) return false;
  auto pos = std::find(it->second.begin(), it->second.end(), phi);
  if (pos == it->second.end()) return false;
  it->second.erase(pos);
  if (it->second.empty()) entries_.erase(it);
  return true;
}

const std::vector<Trajectory>* Bundle::find(const Point& x) const {
  auto it = entries_.find(quantize(x));
  return it == entries_.end() ? nullptr : &it->second;
}

const std::vector<Trajectory>& Bundle::at(const Point& x) const {
  if (const auto* found = find(x)) return *found;
  throw UnknownInitialPoint("state is not a key of the bundle", x);
}

std::vector<Bundle::Entry> Bundle::entries() const {
  std::vector<Entry> out;
  out.reserve(entries_.size());
  for (const auto& [key, trajectories] : entries_) out.push_back({key_point(key), trajectories});
  return out;
}

std::size_t Bundle::trajectory_count() const noexcept {
  std::size_t n = 0;
  for (const auto& kv : entries_) n += kv.second.size();
  return n;
}

Trajectory Bundle::canonical(const Trajectory& phi) const {
  if (horizon_ && is_constant_on(phi, *horizon_)) return Trajectory::constant(phi.initial_value());
  return normalized(phi);
}

namespace {

// Distance from `candidate` to the closest member of `pool`, exact matches
// short-circuiting the metric.
double nearest(const Bundle& bundle, const Trajectory& candidate,
               const std::vector<Trajectory>& pool, const VerifyOptions& opts) {
  for (const auto& psi : pool) {
    if (bundle.canonical(psi) == candidate) return 0.0;
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& psi : pool) {
    best = std::min(best, d_inf(candidate, bundle.canonical(psi), opts.truncation_N, opts.metric).value);
    if (best == 0.0) break;
  }
  return best;
}

}  // namespace

std::vector<Violation> verify_P4(const Bundle& bundle, const VerifyOptions& opts) {
  std::vector<Violation> out;
  for (const auto& entry : bundle.entries()) {
    for (const auto& phi : entry.trajectories) {
      for (double T : bundle.time_grid()) {
        const Trajectory image = bundle.canonical(shift(phi, T));
        const auto* pool = bundle.find(image.initial_value());
        if (pool == nullptr) {
          out.push_back({"P4", entry.key, T, std::nullopt});
          continue;
        }
        const double d = nearest(bundle, image, *pool, opts);
        if (d > opts.tol) out.push_back({"P4", entry.key, T, d});
      }
    }
  }
  return out;
}

std::vector<Violation> verify_P5(const Bundle& bundle, const VerifyOptions& opts) {
  std::vector<Violation> out;
  for (const auto& entry : bundle.entries()) {
    for (const auto& phi1 : entry.trajectories) {
      for (double T : bundle.time_grid()) {
        const auto* followers = bundle.find(phi1.eval(T));
        if (followers == nullptr) continue;  // reported by verify_P4
        for (const auto& phi2 : *followers) {
          const Trajectory spliced = bundle.canonical(continue_at(phi1, phi2, T));
          const double d = nearest(bundle, spliced, entry.trajectories, opts);
          if (d > opts.tol) out.push_back({"P5", entry.key, T, d});
        }
      }
    }
  }
  return out;
}

ClosureResult generate_closure(const Bundle& bundle, const ClosureOptions& opts) {
  Bundle closed(bundle.dim(), bundle.quantum(), bundle.time_grid(), bundle.energy_index(),
                bundle.horizon());
  for (const auto& entry : bundle.entries()) {
    for (const auto& phi : entry.trajectories) closed.insert(closed.canonical(phi));
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& entry : closed.entries()) {
      for (const auto& phi : entry.trajectories) {
        for (double T : closed.time_grid()) {
          changed |= closed.insert(closed.canonical(shift(phi, T)));
          const auto* followers = closed.find(phi.eval(T));
          if (followers == nullptr) continue;
          const std::vector<Trajectory> snapshot = *followers;
          for (const auto& phi2 : snapshot) {
            changed |= closed.insert(closed.canonical(continue_at(phi, phi2, T)));
          }
          if (closed.trajectory_count() > opts.max_trajectories) return {std::move(closed), false};
        }
      }
    }
  }
  return {std::move(closed), true};
}

}  // namespace semiflow
