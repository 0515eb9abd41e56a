#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mdl/error.hpp"
#include "mdl/learners/hedge.hpp"
#include "mdl/random.hpp"
#include "mdl/simplex.hpp"

namespace mdl {

// Disjoint cells covering the action indices [k].
class Partition {
 public:
  explicit Partition(std::vector<std::vector<std::size_t>> cells) : cells_(std::move(cells)) {
    if (cells_.empty()) throw InvalidArgument("Partition: no cells");
    std::size_t k = 0;
    for (const auto& c : cells_) {
      if (c.empty()) throw InvalidArgument("Partition: empty cell");
      k += c.size();
    }
    cell_of_.assign(k, k);
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      for (std::size_t a : cells_[c]) {
        if (a >= k) throw InvalidArgument("Partition: cells do not cover [k]");
        if (cell_of_[a] != k) throw InvalidArgument("Partition: cells overlap");
        cell_of_[a] = c;
      }
    }
  }

  static Partition singletons(std::size_t k) {
    std::vector<std::vector<std::size_t>> cells(k);
    for (std::size_t a = 0; a < k; ++a) cells[a] = {a};
    return Partition(std::move(cells));
  }

  static Partition whole(std::size_t k) {
    std::vector<std::size_t> all(k);
    for (std::size_t a = 0; a < k; ++a) all[a] = a;
    return Partition({std::move(all)});
  }

  // Cell i = {(i, j) : j in [m]} under the pair index a = i * m + j.
  static Partition by_distribution(std::size_t n, std::size_t m) {
    std::vector<std::vector<std::size_t>> cells(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) cells[i].push_back(i * m + j);
    }
    return Partition(std::move(cells));
  }

  std::size_t num_actions() const noexcept { return cell_of_.size(); }
  std::size_t num_cells() const noexcept { return cells_.size(); }
  const std::vector<std::size_t>& cell(std::size_t c) const { return cells_.at(c); }
  std::size_t cell_of(std::size_t action) const { return cell_of_.at(action); }

 private:
  std::vector<std::vector<std::size_t>> cells_;
  std::vector<std::size_t> cell_of_;
};

// Costs observed on one announced cell.
struct PartialFeedback {
  std::vector<std::size_t> indices;
  std::vector<double> costs;
};

// Implicit-exploration importance weighting: each observed index receives
// c_a / (mass + lambda), where mass is the probability the action put on the
// observed cell; unobserved indices receive 0. With lambda = 0 the estimate is
// unbiased for the full cost vector.
inline std::vector<double> importance_weighted_estimate(std::span<const double> action,
                                                        std::span<const std::size_t> observed,
                                                        std::span<const double> costs, double lambda) {
  if (observed.size() != costs.size()) throw InvalidArgument("importance_weighted_estimate: size mismatch");
  if (lambda < 0.0) throw InvalidArgument("importance_weighted_estimate: lambda must be >= 0");
  long double mass = 0.0L;
  for (std::size_t a : observed) {
    if (a >= action.size()) throw InvalidArgument("importance_weighted_estimate: index outside [k]");
    mass += action[a];
  }
  const double denom = static_cast<double>(mass) + lambda;
  if (!(denom > 0.0)) throw InvalidArgument("importance_weighted_estimate: observed cell has no mass");
  std::vector<double> est(action.size(), 0.0);
  for (std::size_t r = 0; r < observed.size(); ++r) est[observed[r]] = costs[r] / denom;
  return est;
}

// Default rates for ELP over k actions and |P| cells:
//   eta = sqrt(2 log k / (|P| T)),  lambda = sqrt(log k / (|P| T)).
// With singleton cells these are the Exp3-IX choices.
struct ElpRates {
  double eta;
  double lambda;
};

inline ElpRates elp_default_rates(std::size_t k, std::size_t cells, std::uint64_t horizon) {
  if (cells < 1 || horizon < 1) throw InvalidArgument("elp_default_rates: need |P| >= 1 and T >= 1");
  if (k < 2) return {1.0, 0.0};
  const double base = std::log(static_cast<double>(k)) / (static_cast<double>(cells) * static_cast<double>(horizon));
  return {std::sqrt(2.0 * base), std::sqrt(base)};
}

// Total-regret bound 2 sqrt(|P| T log(k / delta)) with the high-probability
// slack applied by callers.
inline double elp_regret_bound(std::size_t k, std::size_t cells, std::uint64_t horizon, double delta) {
  return 2.0 * std::sqrt(static_cast<double>(cells) * static_cast<double>(horizon) *
                         std::log(static_cast<double>(k) / delta));
}

// Exp3-style learner with partial feedback on a partition: each round it
// announces one cell, sampled with probability equal to the current Hedge
// mass on the cell, and must then be fed exactly that cell's costs.
class Elp {
 public:
  Elp(Partition partition, double eta, double lambda, Rng rng)
      : partition_(std::move(partition)), hedge_(partition_.num_actions(), eta), lambda_(lambda), rng_(rng) {
    if (lambda < 0.0 || !std::isfinite(lambda)) throw InvalidArgument("Elp: lambda must be >= 0");
  }

  std::size_t size() const noexcept { return partition_.num_actions(); }
  const Partition& partition() const noexcept { return partition_; }
  double eta() const noexcept { return hedge_.eta(); }
  double lambda() const noexcept { return lambda_; }
  const Hedge& hedge() const noexcept { return hedge_; }

  const SimplexWeights& weights() const noexcept { return hedge_.weights(); }
  std::span<const double> action() const noexcept { return hedge_.action(); }

  // Mass of the current action on each cell.
  std::vector<double> cell_masses() const {
    std::vector<double> mass(partition_.num_cells(), 0.0);
    const auto w = hedge_.action();
    for (std::size_t a = 0; a < w.size(); ++a) mass[partition_.cell_of(a)] += w[a];
    return mass;
  }

  // Samples this round's observed cell. Must be followed by feedback().
  std::size_t announce() {
    if (announced_) throw ProtocolViolation("Elp::announce: previous cell has not received feedback");
    announced_ = sample_index(cell_masses(), rng_);
    return *announced_;
  }

  std::optional<std::size_t> announced() const noexcept { return announced_; }

  // Costs for the announced cell, in any order. Returns the next action.
  const SimplexWeights& feedback(const PartialFeedback& fb) {
    if (!announced_) throw ProtocolViolation("Elp::feedback: no cell was announced");
    const auto& cell = partition_.cell(*announced_);
    if (fb.indices.size() != cell.size() || fb.costs.size() != fb.indices.size()) {
      throw ProtocolViolation("Elp::feedback: feedback does not cover the announced cell");
    }
    for (std::size_t a : fb.indices) {
      if (a >= size() || partition_.cell_of(a) != *announced_) {
        throw ProtocolViolation("Elp::feedback: index outside the announced cell");
      }
    }
    std::vector<std::size_t> seen(fb.indices);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
      throw ProtocolViolation("Elp::feedback: repeated index");
    }
    last_estimate_ = importance_weighted_estimate(hedge_.action(), fb.indices, fb.costs, lambda_);
    announced_.reset();
    return hedge_.update(last_estimate_);
  }

  // Importance-weighted cost vector built from the last feedback.
  const std::vector<double>& last_estimate() const noexcept { return last_estimate_; }

 private:
  Partition partition_;
  Hedge hedge_;
  double lambda_;
  Rng rng_;
  std::optional<std::size_t> announced_;
  std::vector<double> last_estimate_;
};

// Exp3 with implicit exploration: ELP on singleton cells.
inline Elp make_exp3(std::size_t k, double eta, double lambda, Rng rng) {
  return Elp(Partition::singletons(k), eta, lambda, rng);
}

}  // namespace mdl
