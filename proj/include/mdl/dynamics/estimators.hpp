#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "mdl/core/instance.hpp"
#include "mdl/core/risk.hpp"
#include "mdl/error.hpp"
#include "mdl/learners/bandit.hpp"
#include "mdl/random.hpp"

namespace mdl {

// Learner-side first-order estimate: one pair (i, j) drawn from the auditor's
// mixture, one z from EX(D_i), and the gradient of l_j at the learner's
// action. For a finite class this is the loss vector [l_j(f, z)]_f.
struct LearnerEstimate {
  std::vector<double> gradient;
  std::size_t pair = 0;
  std::size_t distribution = 0;
  std::size_t loss = 0;
};

inline LearnerEstimate learner_gradient_estimate(std::span<const double> action, std::span<const double> auditor_weights,
                                                 MdlInstance& instance, Rng& rng) {
  if (auditor_weights.size() != instance.num_pairs()) {
    throw InvalidArgument("learner_gradient_estimate: auditor weights do not match the number of pairs");
  }
  if (action.size() != instance.learner_dimension()) {
    throw InvalidArgument("learner_gradient_estimate: action has wrong dimension");
  }
  LearnerEstimate out;
  out.pair = sample_index(auditor_weights, rng);
  out.distribution = out.pair / instance.num_losses();
  out.loss = out.pair % instance.num_losses();
  const Datapoint& z = instance.distribution(out.distribution).draw(rng);
  out.gradient.resize(action.size());
  action_gradient(instance, out.loss, action, z, out.gradient);
  return out;
}

// Auditor-side payoff estimate on an observed set of pairs: one z_i from
// EX(D_i) for each distinct distribution index i in the set, and cost
// 1 - l_j(h, z_i) for every observed (i, j).
struct AuditorEstimate {
  PartialFeedback feedback;
  std::vector<std::size_t> distributions;  // sampled once each, first-appearance order
};

inline AuditorEstimate auditor_payoff_estimate(std::span<const double> action, std::span<const std::size_t> observe,
                                               MdlInstance& instance, Rng& rng) {
  if (observe.empty()) throw InvalidArgument("auditor_payoff_estimate: empty observation set");
  const std::size_t m = instance.num_losses();
  AuditorEstimate out;
  std::vector<const Datapoint*> drawn(instance.num_distributions(), nullptr);
  std::vector<Datapoint> held;
  held.reserve(observe.size());
  for (std::size_t a : observe) {
    if (a >= instance.num_pairs()) throw InvalidArgument("auditor_payoff_estimate: pair index out of range");
    const std::size_t i = a / m;
    if (!drawn[i]) {
      // draw() returns a reference valid until the next draw from D_i; keep a copy.
      held.push_back(instance.distribution(i).draw(rng));
      drawn[i] = &held.back();
      out.distributions.push_back(i);
    }
  }
  out.feedback.indices.assign(observe.begin(), observe.end());
  out.feedback.costs.reserve(observe.size());
  for (std::size_t a : observe) out.feedback.costs.push_back(1.0 - action_loss(instance, a % m, action, *drawn[a / m]));
  return out;
}

}  // namespace mdl
