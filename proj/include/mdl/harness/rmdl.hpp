#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mdl/core/instance.hpp"
#include "mdl/core/risk.hpp"
#include "mdl/learners/hedge.hpp"
#include "mdl/random.hpp"

namespace mdl {

struct RmdlOptions {
  std::vector<std::size_t> train_sizes;  // per group
  std::size_t val_size = 50;             // per group
  std::size_t batch = 16;                // B
  std::size_t adv_batch = 8;             // B'
  std::uint64_t rounds = 2000;           // T
  double lr = 0.5;
  std::optional<double> adv_rate;  // default: Hedge rate for (n, T)
  std::size_t steps = 1;           // gradient steps per round
};

// Fixed training and validation datasets, one pair per group.
struct RmdlSplits {
  std::vector<std::vector<Datapoint>> train;
  std::vector<std::vector<Datapoint>> val;
};

struct RmdlResult {
  std::vector<double> theta;  // average of theta_1..theta_T
  std::vector<double> group_risks;
  double worst_group_risk = 0.0;
  std::uint64_t samples_used = 0;   // size of the datasets drawn from the oracles
  std::vector<double> final_weights;  // adversary's last mixture
};

// Draws train_sizes[i] + val_size points from every group's oracle.
inline RmdlSplits draw_splits(MdlInstance& instance, const RmdlOptions& o, std::uint64_t seed) {
  if (o.train_sizes.size() != instance.num_distributions()) {
    throw InvalidArgument("draw_splits: need one training size per group");
  }
  Rng rng(derive_seed(seed, 0x5e));
  RmdlSplits s;
  for (std::size_t i = 0; i < instance.num_distributions(); ++i) {
    auto& d = instance.distribution(i);
    s.train.emplace_back();
    s.val.emplace_back();
    for (std::size_t k = 0; k < o.train_sizes[i]; ++k) s.train.back().push_back(d.draw(rng));
    for (std::size_t k = 0; k < o.val_size; ++k) s.val.back().push_back(d.draw(rng));
  }
  return s;
}

namespace detail {

inline void check_rmdl(const MdlInstance& instance, const RmdlSplits& s, const RmdlOptions& o) {
  if (instance.has_finite_class() || instance.num_losses() != 1) {
    throw Unsupported("rmdl: needs a parameter space and a single smooth loss");
  }
  if (s.train.size() != instance.num_distributions() || s.val.size() != instance.num_distributions()) {
    throw InvalidArgument("rmdl: need train and validation splits for every group");
  }
  for (std::size_t i = 0; i < s.train.size(); ++i) {
    if (s.train[i].empty() || s.val[i].empty()) throw InvalidArgument("rmdl: empty split");
  }
  if (o.batch < 1 || o.adv_batch < 1 || o.rounds < 1 || o.steps < 1 || !(o.lr > 0.0)) {
    throw InvalidArgument("rmdl: B, B', T, steps must be >= 1 and lr > 0");
  }
}

inline void sgd_step(std::vector<double>& theta, const std::vector<const Datapoint*>& batch, const SmoothLoss& loss,
                     const ConvexParamSpace& space, double lr, std::vector<double>& g, std::vector<double>& scratch) {
  std::fill(g.begin(), g.end(), 0.0);
  for (const auto* z : batch) {
    loss.gradient(theta, *z, scratch);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] += scratch[k];
  }
  const double scale = lr / static_cast<double>(batch.size());
  for (std::size_t k = 0; k < g.size(); ++k) theta[k] -= scale * g[k];
  theta = space.project(theta);
}

inline RmdlResult finish_rmdl(const MdlInstance& instance, std::vector<double> sum, std::uint64_t rounds,
                              const RmdlSplits& s) {
  RmdlResult r;
  for (double& v : sum) v /= static_cast<double>(rounds);
  r.theta = std::move(sum);
  r.group_risks = pair_risks(r.theta, instance);
  for (double v : r.group_risks) r.worst_group_risk = std::max(r.worst_group_risk, v);
  for (std::size_t i = 0; i < s.train.size(); ++i) r.samples_used += s.train[i].size() + s.val[i].size();
  return r;
}

}  // namespace detail

// Resampling multi-distribution learning. Round t:
//   1. B' validation points per group (with replacement) give the adversary
//      the cost 1 - mean loss at theta_{t-1};
//   2. B training points are drawn from sum_i w_i D_i, where D_i is the
//      empirical training split of group i;
//   3. `steps` projected gradient steps on that minibatch give theta_t;
//   4. Hedge over groups takes the step-1 costs.
// Returns the average of theta_1..theta_T and its exact per-group risks.
inline RmdlResult rmdl_train(const MdlInstance& instance, const RmdlSplits& s, const RmdlOptions& o,
                             std::uint64_t seed) {
  detail::check_rmdl(instance, s, o);
  const auto& space = instance.param_space();
  const auto& loss = std::get<SmoothLoss>(instance.loss(0));
  const std::size_t n = instance.num_distributions();
  Hedge adversary(n, o.adv_rate.value_or(n > 1 ? hedge_default_rate(double(n), double(o.rounds)) : 1.0));
  Rng train_rng = substream(seed, Stream::learner_sampling);
  Rng val_rng = substream(seed, Stream::auditor_sampling);

  std::vector<double> theta = space.center(), sum(theta.size(), 0.0), g(theta.size()), scratch(theta.size());
  std::vector<double> costs(n);
  std::vector<const Datapoint*> batch(o.batch);
  for (std::uint64_t t = 1; t <= o.rounds; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      double mean = 0.0;
      for (std::size_t j = 0; j < o.adv_batch; ++j) {
        mean += loss.value(theta, s.val[i][uniform_index(s.val[i].size(), val_rng)]);
      }
      costs[i] = 1.0 - mean / static_cast<double>(o.adv_batch);
    }
    const SimplexWeights w = adversary.weights();
    for (auto& z : batch) {
      const std::size_t i = sample_index(w.values(), train_rng);
      z = &s.train[i][uniform_index(s.train[i].size(), train_rng)];
    }
    for (std::size_t k = 0; k < o.steps; ++k) detail::sgd_step(theta, batch, loss, space, o.lr, g, scratch);
    for (std::size_t k = 0; k < theta.size(); ++k) sum[k] += theta[k];
    adversary.update(costs);
  }
  auto r = detail::finish_rmdl(instance, std::move(sum), o.rounds, s);
  r.final_weights = adversary.weights().vector();
  return r;
}

inline RmdlResult rmdl_train(MdlInstance& instance, const RmdlOptions& o, std::uint64_t seed) {
  instance.reset_draw_counts();
  const auto splits = draw_splits(instance, o, seed);
  return rmdl_train(instance, splits, o, seed);
}

// Pooled ERM comparator: minibatch SGD on the union of all training and
// validation data, sampled uniformly, with B + n B' points per round so both
// methods touch the same number of points per round and see the same data.
inline RmdlResult pooled_erm_train(const MdlInstance& instance, const RmdlSplits& s, const RmdlOptions& o,
                                   std::uint64_t seed) {
  detail::check_rmdl(instance, s, o);
  const auto& space = instance.param_space();
  const auto& loss = std::get<SmoothLoss>(instance.loss(0));
  std::vector<const Datapoint*> pool;
  for (std::size_t i = 0; i < s.train.size(); ++i) {
    for (const auto& z : s.train[i]) pool.push_back(&z);
    for (const auto& z : s.val[i]) pool.push_back(&z);
  }
  Rng rng = substream(seed, Stream::learner_sampling);
  std::vector<double> theta = space.center(), sum(theta.size(), 0.0), g(theta.size()), scratch(theta.size());
  std::vector<const Datapoint*> batch(o.batch + instance.num_distributions() * o.adv_batch);
  for (std::uint64_t t = 1; t <= o.rounds; ++t) {
    for (auto& z : batch) z = pool[uniform_index(pool.size(), rng)];
    for (std::size_t k = 0; k < o.steps; ++k) detail::sgd_step(theta, batch, loss, space, o.lr, g, scratch);
    for (std::size_t k = 0; k < theta.size(); ++k) sum[k] += theta[k];
  }
  return detail::finish_rmdl(instance, std::move(sum), o.rounds, s);
}

}  // namespace mdl
