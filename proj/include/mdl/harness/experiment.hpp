#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

#include "mdl/core/matrix_game.hpp"
#include "mdl/dynamics/mdl_solve.hpp"
#include "mdl/harness/baselines.hpp"
#include "mdl/harness/config.hpp"
#include "mdl/harness/records.hpp"
#include "mdl/harness/rmdl.hpp"
#include "mdl/reductions/gdro.hpp"

namespace mdl {

// Runs fn(0..count-1) on up to `threads` workers and returns the results in
// index order. If any call throws, the exception of the lowest failing index
// is rethrown, so failures are as reproducible as results.
template <class T>
std::vector<T> parallel_map(std::size_t count, std::size_t threads, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(count);
  std::vector<std::exception_ptr> errors(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        out[k] = fn(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

// LP value of the instance, or NaN when it has no finite matrix form or is too big.
inline double opt_or_unavailable(const MdlInstance& inst) {
  if (!has_matrix_form(inst)) return kUnavailable;
  if (inst.learner_dimension() * inst.num_pairs() > kMaxGameEntries) return kUnavailable;
  return brute_force_opt(inst).value;
}

// Per-distribution batch size for batch-erm when none is configured:
// uniform convergence to eps/2 over |H| hypotheses and n m pairs,
// m = 2 log(2 |H| n m / delta) / eps^2, times t_scale.
inline std::uint64_t default_batch_size(const MdlInstance& inst, double eps, double delta, double t_scale) {
  const double k = static_cast<double>(inst.learner_dimension()) * static_cast<double>(inst.num_pairs());
  const double m = t_scale * 2.0 * std::log(2.0 * k / delta) / (eps * eps);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(m)));
}

namespace detail {

inline std::uint64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
}

inline void fill_quality(RunRecord& r, const std::vector<double>& h, const MdlInstance& inst, double opt) {
  if (inst.all_finite_support()) {
    r.worst_group_risk = output_worst_risk(h, inst);
    if (!std::isnan(opt)) r.opt_gap = r.worst_group_risk - opt;
  }
}

inline BatchMode batch_mode(const ExperimentConfig& c) { return c.batch_mode == "pure" ? BatchMode::pure : BatchMode::mixed; }

inline RmdlOptions rmdl_options(const ExperimentConfig& c) {
  RmdlOptions o;
  o.train_sizes = c.train_sizes;
  o.val_size = c.val_size;
  o.batch = c.batch;
  o.adv_batch = c.adv_batch;
  o.rounds = c.rmdl_rounds;
  o.lr = c.lr;
  o.adv_rate = c.adv_rate;
  o.steps = c.steps;
  return o;
}

// Records of one seed. rmdl yields two (rmdl and its pooled-ERM comparator).
inline std::vector<RunRecord> run_one(const ExperimentConfig& c, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  MdlInstance inst = build_instance(c.instance, seed);
  const double opt = opt_or_unavailable(inst);
  RunRecord r;
  r.algorithm = c.algorithm;
  r.n = inst.num_distributions();
  r.size = instance_size(inst);
  r.eps_target = c.eps;
  r.seed = seed;
  std::vector<RunRecord> out;
  if (c.algorithm == "mdl") {
    const std::uint64_t t = c.rounds.value_or(mdl_horizon(inst, c.eps, c.delta, c.t_scale));
    const auto res = mdl_solve(inst, t, seed);
    r.samples_used = res.total_samples;
    fill_quality(r, res.avg_min_action, inst, opt);
  } else if (c.algorithm == "gdro") {
    GdroOptions go;
    go.t_scale = c.t_scale;
    go.iterations = c.rounds;
    const auto res = gdro_solve(inst, c.eps, c.delta, seed, go);
    r.samples_used = res.run.total_samples;
    fill_quality(r, res.theta, inst, opt);
  } else if (c.algorithm == "batch-erm") {
    const std::uint64_t m = c.batch_m.value_or(default_batch_size(inst, c.eps, c.delta, c.t_scale));
    const auto res = batch_erm_baseline(inst, m, seed, batch_mode(c));
    r.samples_used = res.samples_used;
    fill_quality(r, res.hypothesis, inst, opt);
  } else {
    const auto o = rmdl_options(c);
    inst.reset_draw_counts();
    const auto splits = draw_splits(inst, o, seed);
    const auto rm = rmdl_train(inst, splits, o, seed);
    r.samples_used = inst.total_draws();
    fill_quality(r, rm.theta, inst, opt);
    RunRecord pooled = r;
    pooled.algorithm = "pooled-erm";
    const auto pe = pooled_erm_train(inst, splits, o, seed);
    fill_quality(pooled, pe.theta, inst, opt);
    if (c.timing) r.wall_ms = pooled.wall_ms = elapsed_ms(start);
    out.push_back(r);
    out.push_back(pooled);
    return out;
  }
  if (c.timing) r.wall_ms = elapsed_ms(start);
  out.push_back(r);
  return out;
}

inline std::vector<RunRecord> number_records(std::vector<std::vector<RunRecord>> groups) {
  std::vector<RunRecord> out;
  for (auto& g : groups) {
    for (auto& r : g) {
      r.run_id = out.size();
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace detail

// One record per seed (two for rmdl); deterministic per (config, seed).
inline std::vector<RunRecord> run_experiment(const ExperimentConfig& c) {
  validate_config(c);
  return detail::number_records(parallel_map<std::vector<RunRecord>>(
      c.seeds.size(), c.threads, [&](std::size_t k) { return detail::run_one(c, c.seeds[k]); }));
}

// Samples-to-target by doubling search: budgets b0, 2 b0, 4 b0, ..., each
// level run with a fresh seed derived from (seed, level). The first budget
// whose output has gap <= eps gives the recorded sample count.
struct TargetSearch {
  bool reached = false;
  std::uint64_t samples = 0;  // samples used by the first successful level (or the last level tried)
  std::uint64_t budget = 0;   // T for mdl, m for batch-erm
  std::uint32_t level = 0;
  double gap = kUnavailable;
  double worst_group_risk = kUnavailable;
};

inline TargetSearch mdl_samples_to_target(const MdlInstance& base, double eps, double opt, std::uint64_t seed,
                                          std::uint64_t start, std::uint32_t doublings) {
  if (std::isnan(opt)) throw Unsupported("samples-to-target: OPT is not computable for this instance");
  TargetSearch s;
  for (std::uint32_t level = 0; level <= doublings; ++level) {
    MdlInstance inst = base;
    const std::uint64_t t = start << level;
    const auto r = mdl_solve(inst, t, derive_seed(seed, level));
    s.level = level;
    s.budget = t;
    s.samples = r.total_samples;
    s.worst_group_risk = output_worst_risk(r.avg_min_action, inst);
    s.gap = s.worst_group_risk - opt;
    if (is_eps_optimal(s.gap, eps)) {
      s.reached = true;
      break;
    }
  }
  return s;
}

inline TargetSearch batch_samples_to_target(const MdlInstance& base, double eps, double opt, std::uint64_t seed,
                                            std::uint64_t start, std::uint32_t doublings,
                                            BatchMode mode = BatchMode::mixed) {
  if (std::isnan(opt)) throw Unsupported("samples-to-target: OPT is not computable for this instance");
  TargetSearch s;
  for (std::uint32_t level = 0; level <= doublings; ++level) {
    MdlInstance inst = base;
    const std::uint64_t m = start << level;
    const auto r = batch_erm_baseline(inst, m, derive_seed(seed, level), mode);
    s.level = level;
    s.budget = m;
    s.samples = r.samples_used;
    s.worst_group_risk = output_worst_risk(r.hypothesis, inst);
    s.gap = s.worst_group_risk - opt;
    if (is_eps_optimal(s.gap, eps)) {
      s.reached = true;
      break;
    }
  }
  return s;
}

namespace detail {

inline RunRecord target_record(const std::string& algorithm, const ExperimentConfig& c, std::uint64_t seed) {
  const MdlInstance inst = build_instance(c.instance, seed);
  const double opt = opt_or_unavailable(inst);
  const auto start = std::chrono::steady_clock::now();
  TargetSearch s;
  if (algorithm == "mdl") {
    s = mdl_samples_to_target(inst, c.eps, opt, seed, c.search_start, c.search_doublings);
  } else if (algorithm == "batch-erm") {
    s = batch_samples_to_target(inst, c.eps, opt, seed, 1, c.search_doublings, batch_mode(c));
  } else {
    throw ConfigError("algorithm", "sweeps support mdl and batch-erm");
  }
  RunRecord r;
  r.algorithm = algorithm;
  r.n = inst.num_distributions();
  r.size = instance_size(inst);
  r.eps_target = c.eps;
  r.samples_used = s.samples;
  r.opt_gap = s.gap;
  r.worst_group_risk = s.worst_group_risk;
  r.seed = seed;
  if (c.timing) r.wall_ms = elapsed_ms(start);
  return r;
}

inline ExperimentConfig at_axis_value(ExperimentConfig c, double v) {
  if (c.axis == "eps") {
    c.eps = v;
    return c;
  }
  if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError("values", "n and size values must be positive integers");
  const auto k = static_cast<std::size_t>(v);
  if (c.axis == "n") {
    c.instance.n = k;
  } else {
    const auto& f = c.instance.family;
    if (f == "bilinear" || f == "logistic") {
      c.instance.dim = k;
    } else if (f == "lower-bound") {
      c.instance.w = k;
    } else {
      c.instance.class_size = k;
    }
  }
  return c;
}

}  // namespace detail

// Samples-to-target across an axis (n, eps or size): one record per (value, seed).
inline std::vector<RunRecord> sweep(const ExperimentConfig& c) {
  validate_config(c);
  if (c.values.empty()) throw ConfigError("values", "sweep needs at least one axis value");
  const std::size_t per = c.seeds.size();
  return detail::number_records(parallel_map<std::vector<RunRecord>>(
      c.values.size() * per, c.threads, [&](std::size_t k) {
        const auto cv = detail::at_axis_value(c, c.values[k / per]);
        return std::vector<RunRecord>{detail::target_record(c.algorithm, cv, c.seeds[k % per])};
      }));
}

// Lower-bound family scaling study: for each n in `values` (default 2, 4, 8)
// samples-to-target of mdl and of batch-erm on the same instances.
inline std::vector<RunRecord> lowerbound_sweep(ExperimentConfig c) {
  c.instance.family = "lower-bound";
  if (c.values.empty()) c.values = {2, 4, 8};
  c.axis = "n";
  validate_config(c);
  const std::size_t per = c.seeds.size();
  return detail::number_records(parallel_map<std::vector<RunRecord>>(
      c.values.size() * per, c.threads, [&](std::size_t k) {
        const auto cv = detail::at_axis_value(c, c.values[k / per]);
        const auto seed = c.seeds[k % per];
        return std::vector<RunRecord>{detail::target_record("mdl", cv, seed),
                                      detail::target_record("batch-erm", cv, seed)};
      }));
}

}  // namespace mdl
