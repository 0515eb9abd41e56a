#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mdl/core/instance.hpp"
#include "mdl/dynamics/mdl_solve.hpp"

namespace mdl {

struct GdroOptions {
  double t_scale = 1.0;
  std::optional<std::uint64_t> iterations;  // overrides the horizon from required_iterations
  std::optional<std::uint64_t> sample_budget;
  bool record_transcript = false;
};

struct GdroResult {
  std::vector<double> theta;  // averaged parameter
  SolveResult run;
};

// Group DRO: min_theta max_i R_{D_i}(theta) for one smooth convex loss.
// mdl_solve with mirror descent from the center of Theta against ELP on
// singleton cells (Exp3 over the n groups). T comes from required_iterations
// with the learner's regret constant gamma_- = D_Theta.
inline GdroResult gdro_solve(MdlInstance& instance, double eps, double delta, std::uint64_t seed,
                             const GdroOptions& options = {}) {
  if (instance.has_finite_class()) throw Unsupported("gdro_solve: needs a convex parameter space");
  if (instance.param_space().dgf() == Dgf::none) throw Unsupported("gdro_solve: parameter space has no dgf");
  if (instance.num_losses() != 1) throw InvalidArgument("gdro_solve: group DRO takes exactly one loss");
  const std::uint64_t horizon = options.iterations.value_or(mdl_horizon(instance, eps, delta, options.t_scale));
  MdlOptions mo;
  mo.sample_budget = options.sample_budget;
  mo.record_transcript = options.record_transcript;
  GdroResult out;
  out.run = mdl_solve(instance, horizon, seed, mo);
  out.theta = instance.param_space().project(out.run.avg_min_action);
  return out;
}

// Empirical distribution of a batch: uniform weight 1/N per draw, repeated
// points merged (first-appearance order).
inline DataDistribution make_empirical_distribution(std::span<const Datapoint> batch) {
  if (batch.empty()) throw InvalidArgument("make_empirical_distribution: empty batch");
  std::vector<Datapoint> support;
  std::vector<double> counts;
  for (const auto& z : batch) {
    std::size_t k = 0;
    while (k < support.size() && !(support[k] == z)) ++k;
    if (k == support.size()) {
      support.push_back(z);
      counts.push_back(0.0);
    }
    counts[k] += 1.0;
  }
  for (double& c : counts) c /= static_cast<double>(batch.size());
  return DataDistribution(std::move(support), std::move(counts));
}

// Same losses and space, with D_i replaced by the empirical distribution of batches[i].
inline MdlInstance make_empirical_instance(const MdlInstance& instance,
                                           const std::vector<std::vector<Datapoint>>& batches) {
  if (batches.size() != instance.num_distributions()) {
    throw InvalidArgument("make_empirical_instance: need one batch per distribution");
  }
  std::vector<DataDistribution> ds;
  for (const auto& b : batches) ds.push_back(make_empirical_distribution(b));
  return MdlInstance(std::move(ds), instance.losses(), instance.space());
}

// gdro_solve on the empirical distributions. Guarantees refer to empirical risks.
inline GdroResult empirical_gdro(const MdlInstance& instance, const std::vector<std::vector<Datapoint>>& batches,
                                 double eps, double delta, std::uint64_t seed, const GdroOptions& options = {}) {
  auto empirical = make_empirical_instance(instance, batches);
  return gdro_solve(empirical, eps, delta, seed, options);
}

}  // namespace mdl
