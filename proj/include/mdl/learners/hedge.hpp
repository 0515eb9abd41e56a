#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mdl/error.hpp"
#include "mdl/simplex.hpp"

namespace mdl {

// eta = sqrt(log k / T), the rate under which Hedge's total regret over T
// rounds of [0,1] costs is at most 2 sqrt(T log k). Real-valued arguments are
// accepted so the formula can be evaluated off the integers.
inline double hedge_default_rate(double k, double horizon) {
  if (!(k >= 2.0)) throw InvalidArgument("hedge_default_rate: need k >= 2");
  if (!(horizon >= 1.0)) throw InvalidArgument("hedge_default_rate: need T >= 1");
  return std::sqrt(std::log(k) / horizon);
}

// Total-regret bound matching hedge_default_rate.
inline double hedge_regret_bound(std::size_t k, std::uint64_t horizon) {
  return 2.0 * std::sqrt(static_cast<double>(horizon) * std::log(static_cast<double>(k)));
}

// Softmax of -eta * cumulative, shifted by the minimum so the largest
// exponent is 0. Adding a constant to every entry leaves the result unchanged.
inline std::vector<double> exponential_weights(std::span<const double> cumulative, double eta) {
  const double lo = *std::min_element(cumulative.begin(), cumulative.end());
  std::vector<double> w(cumulative.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(-eta * (cumulative[i] - lo));
  const double s = accurate_sum(w);
  for (double& v : w) v /= s;
  return w;
}

// Exponential gradient descent over k actions:
//   a^{t+1}_i  proportional to  exp(-eta * sum_{tau <= t} c^tau_i).
class Hedge {
 public:
  Hedge(std::size_t k, double eta) : eta_(eta), cumulative_(k, 0.0), weights_(SimplexWeights::uniform(k)) {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidArgument("Hedge: learning rate must be positive");
  }

  std::size_t size() const noexcept { return cumulative_.size(); }
  double eta() const noexcept { return eta_; }
  std::uint64_t rounds() const noexcept { return rounds_; }
  const std::vector<double>& cumulative_costs() const noexcept { return cumulative_; }

  const SimplexWeights& weights() const noexcept { return weights_; }
  std::span<const double> action() const noexcept { return weights_.values(); }

  // Adds one cost vector and returns the next action.
  const SimplexWeights& update(std::span<const double> cost) {
    if (cost.size() != cumulative_.size()) throw InvalidArgument("Hedge::update: cost has wrong length");
    for (double c : cost) {
      if (!std::isfinite(c)) throw InvalidArgument("Hedge::update: non-finite cost");
    }
    for (std::size_t i = 0; i < cost.size(); ++i) cumulative_[i] += cost[i];
    ++rounds_;
    weights_ = SimplexWeights::normalized(exponential_weights(cumulative_, eta_));
    return weights_;
  }

 private:
  double eta_;
  std::vector<double> cumulative_;
  SimplexWeights weights_;
  std::uint64_t rounds_ = 0;
};

}  // namespace mdl
