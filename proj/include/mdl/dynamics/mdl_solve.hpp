#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mdl/core/instance.hpp"
#include "mdl/core/matrix_game.hpp"
#include "mdl/core/risk.hpp"
#include "mdl/dynamics/estimators.hpp"
#include "mdl/dynamics/iterations.hpp"
#include "mdl/dynamics/solve_game.hpp"
#include "mdl/dynamics/solve_result.hpp"
#include "mdl/learners/bandit.hpp"
#include "mdl/learners/hedge.hpp"
#include "mdl/learners/mirror_descent.hpp"

namespace mdl {

struct MdlOptions {
  std::optional<double> learner_rate;         // default: Hedge / mirror-descent rate for T
  std::optional<double> auditor_rate;         // default: elp_default_rates
  std::optional<double> auditor_exploration;  // default: elp_default_rates
  std::optional<std::uint64_t> sample_budget;
  bool record_transcript = false;
};

// Norm in which the learner's gradients are bounded.
inline NormPair learner_norm(const MdlInstance& instance) {
  return instance.has_finite_class() ? NormPair::linf_l1 : instance.param_space().norm();
}

// Regret constants gamma (regret <= sqrt(gamma T)) of the default players:
// Hedge over H has gamma = 4 log|H|; mirror descent uses the Bregman radius
// D_Theta; ELP over the n*m pairs with one cell per distribution has
// gamma = 4 n log(n m / delta).
inline double learner_regret_constant(const MdlInstance& instance) {
  if (instance.has_finite_class()) {
    const auto k = static_cast<double>(instance.finite_class().size());
    return k > 1 ? 4.0 * std::log(k) : 0.0;
  }
  return instance.param_space().bregman_radius();
}

inline double auditor_regret_constant(const MdlInstance& instance, double delta) {
  const auto k = static_cast<double>(instance.num_pairs());
  if (k < 2) return 0.0;
  return 4.0 * static_cast<double>(instance.num_distributions()) * std::log(k / delta);
}

// Theoretical horizon for the default players of mdl_solve:
// L = max(gradient bound, 1) (auditor costs lie in [0,1]); R = the larger of
// the two action-set diameters.
inline std::uint64_t mdl_horizon(const MdlInstance& instance, double eps, double delta, double t_scale = 1.0) {
  const double lip = std::max(instance.gradient_bound(), 1.0);
  const double learner_diam = instance.has_finite_class() ? (instance.finite_class().size() > 1 ? 2.0 : 0.0)
                                                          : instance.param_space().diameter();
  const double auditor_diam = instance.num_pairs() > 1 ? 2.0 : 0.0;
  const double radius = std::max(learner_diam, auditor_diam);
  const auto t = required_iterations(eps, delta, lip, radius, learner_regret_constant(instance),
                                     auditor_regret_constant(instance, delta), t_scale);
  return std::max<std::uint64_t>(t, 1);
}

namespace detail {

inline void check_learner_gradient(const MdlInstance& instance, std::span<const double> g) {
  check_bound(g, instance.gradient_bound(), learner_norm(instance), "mdl_solve: learner oracle");
}

inline void check_auditor_costs(std::span<const double> costs) {
  for (double c : costs) {
    if (!(c >= 0.0 && c <= 1.0)) throw ContractViolation("mdl_solve: auditor cost outside [0,1]");
  }
}

inline SolveResult finish(SolveResult out, const MdlInstance& instance, std::vector<double> sum_x,
                          std::vector<double> sum_y, std::uint64_t rounds) {
  out.rounds = rounds;
  if (rounds > 0) {
    out.avg_min_action = mean(std::move(sum_x), rounds);
    out.avg_max_action = mean(std::move(sum_y), rounds);
  }
  out.per_distribution_samples = instance.draw_counts();
  out.total_samples = instance.total_draws();
  out.oracle_calls = out.total_samples;
  return out;
}

}  // namespace detail

// On-demand multi-distribution learning. The learner plays against the
// auditor's mixture over (distribution, loss) pairs; the auditor plays ELP on
// a partition of the pairs. Round t:
//   1. learner plays theta_t, auditor plays w_t and announces cell I_t;
//   2. one sample for the learner: (i, j) ~ w_t, z ~ D_i, gradient of l_j at theta_t;
//   3. one sample per distinct distribution in I_t for the auditor, costs 1 - l_j(theta_t, z_i);
//   4. both players update.
// With one cell per distribution the run draws exactly 2T samples. The
// returned averages are over theta_1..theta_T and w_1..w_T. Draw counters are
// reset at the start of the run.
template <OnlineLearner L>
SolveResult mdl_solve(MdlInstance& instance, L& learner, Elp& auditor, std::uint64_t horizon, std::uint64_t seed,
                      const MdlOptions& options = {}) {
  if (horizon < 1) throw InvalidArgument("mdl_solve: T must be >= 1");
  if (auditor.size() != instance.num_pairs()) throw InvalidArgument("mdl_solve: auditor must play over the n*m pairs");
  if (learner.action().size() != instance.learner_dimension()) {
    throw InvalidArgument("mdl_solve: learner action has wrong dimension");
  }
  instance.reset_draw_counts();
  Rng learner_rng = substream(seed, Stream::learner_sampling);
  Rng auditor_rng = substream(seed, Stream::auditor_sampling);

  SolveResult out;
  out.seed = seed;
  std::vector<double> sum_x(instance.learner_dimension(), 0.0), sum_y(instance.num_pairs(), 0.0);
  std::vector<double> theta;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    const auto& part = auditor.partition();
    if (options.sample_budget) {
      // Worst case for this round: one learner sample plus one per distribution in any cell.
      std::size_t need = 0;
      for (std::size_t c = 0; c < part.num_cells(); ++c) {
        std::vector<bool> seen(instance.num_distributions(), false);
        std::size_t distinct = 0;
        for (std::size_t a : part.cell(c)) {
          const std::size_t i = a / instance.num_losses();
          if (!seen[i]) {
            seen[i] = true;
            ++distinct;
          }
        }
        need = std::max(need, distinct);
      }
      if (instance.total_draws() + 1 + need > *options.sample_budget) {
        throw BudgetExhausted("mdl_solve: sample budget exhausted after " + std::to_string(t - 1) + " rounds",
                              detail::finish(std::move(out), instance, sum_x, sum_y, t - 1));
      }
    }
    theta.assign(learner.action().begin(), learner.action().end());
    const auto w = auditor.action();
    for (std::size_t i = 0; i < theta.size(); ++i) sum_x[i] += theta[i];
    for (std::size_t a = 0; a < w.size(); ++a) sum_y[a] += w[a];

    const std::size_t cell = auditor.announce();
    auto le = learner_gradient_estimate(theta, w, instance, learner_rng);
    detail::check_learner_gradient(instance, le.gradient);
    auto ae = auditor_payoff_estimate(theta, part.cell(cell), instance, auditor_rng);
    detail::check_auditor_costs(ae.feedback.costs);

    if (options.record_transcript) {
      RoundRecord rec;
      rec.round = t;
      rec.min_action = theta;
      rec.max_action.assign(w.begin(), w.end());
      rec.min_gradient = le.gradient;
      rec.learner_pair = le.pair;
      rec.auditor_cell = cell;
      rec.observed = ae.feedback.indices;
      rec.max_costs = ae.feedback.costs;
      out.transcript.push_back(std::move(rec));
    }
    learner.update(le.gradient);
    auditor.feedback(ae.feedback);
  }
  return detail::finish(std::move(out), instance, std::move(sum_x), std::move(sum_y), horizon);
}

// Default players: Hedge over H (finite class) or mirror descent from the
// center of Theta, against ELP with one cell per distribution.
inline SolveResult mdl_solve(MdlInstance& instance, std::uint64_t horizon, std::uint64_t seed,
                             const MdlOptions& options = {}) {
  if (horizon < 1) throw InvalidArgument("mdl_solve: T must be >= 1");
  const auto rates = elp_default_rates(instance.num_pairs(), instance.num_distributions(), horizon);
  Elp auditor(Partition::by_distribution(instance.num_distributions(), instance.num_losses()),
              options.auditor_rate.value_or(rates.eta), options.auditor_exploration.value_or(rates.lambda),
              substream(seed, Stream::auditor_algorithm));
  if (instance.has_finite_class()) {
    const std::size_t k = instance.finite_class().size();
    const double eta = options.learner_rate.value_or(
        k > 1 ? hedge_default_rate(static_cast<double>(k), static_cast<double>(horizon)) : 1.0);
    Hedge learner(k, eta);
    return mdl_solve(instance, learner, auditor, horizon, seed, options);
  }
  const auto& space = instance.param_space();
  const double eta = options.learner_rate.value_or(omd_default_rate(space, instance.gradient_bound(), horizon));
  MirrorDescent learner(space, eta);
  return mdl_solve(instance, learner, auditor, horizon, seed, options);
}

// Exploitability of the averaged profile in the exact risk game:
//   max_a R_a(avg_min) - min_f sum_a avg_max_a R_a(f).
inline double measured_equilibrium_gap(const MdlInstance& instance, const SolveResult& r) {
  const Matrix m = risk_matrix(instance);
  return equilibrium_gap(m, r.avg_min_action, r.avg_max_action);
}

}  // namespace mdl
