#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mdl/core/param_space.hpp"
#include "mdl/error.hpp"

namespace mdl {

// One prox step: argmin_{u in Theta} <eta * g, u> + V(theta, u).
//   entropy dgf on the simplex -> multiplicative weights
//   euclidean dgf              -> projected gradient descent
inline std::vector<double> omd_step(std::span<const double> theta, std::span<const double> gradient, double eta,
                                    const ConvexParamSpace& space) {
  if (!space.is_feasible(theta)) throw InvalidArgument("omd_step: theta is not feasible");
  if (gradient.size() != theta.size()) throw InvalidArgument("omd_step: gradient has wrong dimension");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidArgument("omd_step: eta must be finite and >= 0");
  for (double g : gradient) {
    if (!std::isfinite(g)) throw InvalidArgument("omd_step: non-finite gradient");
  }
  switch (space.dgf()) {
    case Dgf::none:
      throw Unsupported("omd_step: space has no distance-generating function");
    case Dgf::entropy: {
      // theta_i * exp(-eta g_i), in log space and shifted for stability.
      std::vector<double> logw(theta.size());
      double hi = -INFINITY;
      for (std::size_t i = 0; i < theta.size(); ++i) {
        logw[i] = theta[i] > 0.0 ? std::log(theta[i]) - eta * gradient[i] : -INFINITY;
        hi = std::max(hi, logw[i]);
      }
      std::vector<double> out(theta.size());
      for (std::size_t i = 0; i < theta.size(); ++i) out[i] = std::exp(logw[i] - hi);
      const double s = accurate_sum(out);
      for (double& v : out) v /= s;
      return out;
    }
    case Dgf::euclidean: {
      std::vector<double> x(theta.begin(), theta.end());
      for (std::size_t i = 0; i < x.size(); ++i) x[i] -= eta * gradient[i];
      return space.project(x);
    }
  }
  return {};
}

// eta = sqrt(2 D / (L^2 T)), balancing D / eta against eta L^2 T / 2.
inline double omd_default_rate(const ConvexParamSpace& space, double gradient_bound, std::uint64_t horizon) {
  if (!(gradient_bound > 0.0) || horizon < 1) throw InvalidArgument("omd_default_rate: need L > 0 and T >= 1");
  const double d = space.bregman_radius();
  if (!(d > 0.0)) return 1.0;
  return std::sqrt(2.0 * d / (gradient_bound * gradient_bound * static_cast<double>(horizon)));
}

// Online mirror descent started at the center of Theta.
class MirrorDescent {
 public:
  MirrorDescent(ConvexParamSpace space, double eta) : space_(std::move(space)), eta_(eta) {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidArgument("MirrorDescent: learning rate must be positive");
    space_.bregman_radius();  // throws Unsupported without a dgf
    theta_ = space_.center();
  }

  const ConvexParamSpace& space() const noexcept { return space_; }
  double eta() const noexcept { return eta_; }
  std::uint64_t rounds() const noexcept { return rounds_; }
  std::span<const double> action() const noexcept { return theta_; }

  std::span<const double> update(std::span<const double> gradient) {
    theta_ = omd_step(theta_, gradient, eta_, space_);
    ++rounds_;
    return theta_;
  }

 private:
  ConvexParamSpace space_;
  double eta_;
  std::vector<double> theta_;
  std::uint64_t rounds_ = 0;
};

}  // namespace mdl
