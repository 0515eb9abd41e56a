#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mdl/core/param_space.hpp"
#include "mdl/error.hpp"
#include "mdl/simplex.hpp"

namespace mdl {

// min over u in Theta of <g, u>.
inline double linear_minimum(const ConvexParamSpace& space, std::span<const double> g) {
  if (g.size() != space.dimension()) throw InvalidArgument("linear_minimum: wrong dimension");
  switch (space.geometry()) {
    case Geometry::simplex: {
      double m = g[0];
      for (double v : g) m = std::min(m, v);
      return m;
    }
    case Geometry::ball:
      return -space.radius() * std::sqrt(dot(g, g));
    case Geometry::box: {
      double s = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) s += std::min(g[i] * space.lower()[i], g[i] * space.upper()[i]);
      return s;
    }
  }
  return 0.0;
}

// Running regret bookkeeping for linear costs on the simplex: cumulative cost
// per action and the cost actually incurred by the played actions.
class RegretLedger {
 public:
  explicit RegretLedger(std::size_t k) : cumulative_(k, 0.0) {
    if (k == 0) throw InvalidArgument("RegretLedger: k = 0");
  }

  void record(std::span<const double> action, std::span<const double> cost) {
    if (action.size() != cumulative_.size() || cost.size() != cumulative_.size()) {
      throw InvalidArgument("RegretLedger::record: wrong length");
    }
    incurred_ += dot(action, cost);
    for (std::size_t i = 0; i < cost.size(); ++i) cumulative_[i] += cost[i];
    ++rounds_;
  }

  std::size_t size() const noexcept { return cumulative_.size(); }
  std::uint64_t rounds() const noexcept { return rounds_; }
  double incurred() const noexcept { return static_cast<double>(incurred_); }
  const std::vector<double>& cumulative_costs() const noexcept { return cumulative_; }

  // Best fixed action in hindsight, lowest index on ties.
  std::size_t best_action() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < cumulative_.size(); ++i) {
      if (cumulative_[i] < cumulative_[best]) best = i;
    }
    return best;
  }

  double regret() const { return incurred() - cumulative_[best_action()]; }

 private:
  std::vector<double> cumulative_;
  long double incurred_ = 0.0L;
  std::uint64_t rounds_ = 0;
};

// sum_t <c_t, a_t> - min_{a*} sum_t <c_t, a*>, actions on the simplex (the
// minimum is attained at a vertex).
inline double regret(const std::vector<std::vector<double>>& actions, const std::vector<std::vector<double>>& costs) {
  if (actions.size() != costs.size()) throw InvalidArgument("regret: sequences have different lengths");
  if (actions.empty()) return 0.0;
  RegretLedger ledger(actions.front().size());
  for (std::size_t t = 0; t < actions.size(); ++t) ledger.record(actions[t], costs[t]);
  return ledger.regret();
}

// max_{a* in Theta} sum_t <g_t, a_t - a*> for gradients g_t taken at the
// played actions. Upper-bounds regret on convex costs; equals it on linear
// ones.
inline double variational_error(const std::vector<std::vector<double>>& actions,
                                const std::vector<std::vector<double>>& gradients, const ConvexParamSpace& space) {
  if (actions.size() != gradients.size()) throw InvalidArgument("variational_error: sequences have different lengths");
  long double played = 0.0L;
  std::vector<double> total(space.dimension(), 0.0);
  for (std::size_t t = 0; t < actions.size(); ++t) {
    if (gradients[t].size() != total.size()) throw InvalidArgument("variational_error: wrong dimension");
    played += dot(actions[t], gradients[t]);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += gradients[t][i];
  }
  return static_cast<double>(played) - linear_minimum(space, total);
}

}  // namespace mdl
