#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mdl/core/param_space.hpp"
#include "mdl/dynamics/solve_result.hpp"
#include "mdl/error.hpp"
#include "mdl/random.hpp"

namespace mdl {

// Full-information online learner: plays action(), then receives the cost
// gradient at that action.
template <class L>
concept OnlineLearner = requires(L& l, std::span<const double> g) {
  { l.action() } -> std::convertible_to<std::span<const double>>;
  l.update(g);
};

inline double vector_norm(std::span<const double> g, NormPair norm) {
  if (norm == NormPair::linf_l1) {
    double m = 0.0;
    for (double v : g) m = std::max(m, std::abs(v));
    return m;
  }
  long double s = 0.0L;
  for (double v : g) s += static_cast<long double>(v) * v;
  return std::sqrt(static_cast<double>(s));
}

// Noisy first-order oracle: query(x, y, rng) returns a gradient estimate
// whose norm must not exceed `bound`.
template <class F>
struct FirstOrderOracle {
  F query;
  double bound = 1.0;
  NormPair norm = NormPair::linf_l1;
};

namespace detail {
inline void check_bound(std::span<const double> g, double bound, NormPair norm, const char* who) {
  for (double v : g) {
    if (!std::isfinite(v)) throw ContractViolation(std::string(who) + ": non-finite gradient estimate");
  }
  const double n = vector_norm(g, norm);
  if (n > bound * (1.0 + 1e-12) + 1e-12) {
    throw ContractViolation(std::string(who) + ": gradient estimate norm " + format_double(n) + " exceeds bound " +
                            format_double(bound));
  }
}

inline void accumulate(std::vector<double>& sum, std::span<const double> x) {
  if (sum.empty()) sum.assign(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) sum[i] += x[i];
}

inline std::vector<double> mean(std::vector<double> sum, std::uint64_t rounds) {
  for (double& v : sum) v /= static_cast<double>(rounds);
  return sum;
}
}  // namespace detail

struct SolveOptions {
  bool record_transcript = false;
};

// No-regret dynamics for min_x max_y phi(x, y) with noisy first-order
// oracles. Each round both learners play, each oracle is queried once at the
// current pair, and each learner is updated with its own estimate (the max
// player receives costs, i.e. estimates of -grad_y phi up to a shift).
// Returns the averaged actions over rounds 1..T.
template <OnlineLearner MinL, OnlineLearner MaxL, class MinF, class MaxF>
SolveResult solve_game(FirstOrderOracle<MinF> min_oracle, FirstOrderOracle<MaxF> max_oracle, MinL& q_minus,
                       MaxL& q_plus, std::uint64_t horizon, std::uint64_t seed, const SolveOptions& options = {}) {
  if (horizon < 1) throw InvalidArgument("solve_game: T must be >= 1");
  Rng min_rng = substream(seed, Stream::learner_sampling);
  Rng max_rng = substream(seed, Stream::auditor_sampling);
  SolveResult out;
  out.seed = seed;
  std::vector<double> sum_x, sum_y;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    const std::vector<double> x(q_minus.action().begin(), q_minus.action().end());
    const std::vector<double> y(q_plus.action().begin(), q_plus.action().end());
    const std::vector<double> gx = min_oracle.query(std::span<const double>(x), std::span<const double>(y), min_rng);
    const std::vector<double> gy = max_oracle.query(std::span<const double>(x), std::span<const double>(y), max_rng);
    detail::check_bound(gx, min_oracle.bound, min_oracle.norm, "solve_game: min oracle");
    detail::check_bound(gy, max_oracle.bound, max_oracle.norm, "solve_game: max oracle");
    out.oracle_calls += 2;
    detail::accumulate(sum_x, x);
    detail::accumulate(sum_y, y);
    if (options.record_transcript) {
      RoundRecord rec;
      rec.round = t;
      rec.min_action = x;
      rec.max_action = y;
      rec.min_gradient = gx;
      rec.max_costs = gy;
      out.transcript.push_back(std::move(rec));
    }
    q_minus.update(gx);
    q_plus.update(gy);
  }
  out.rounds = horizon;
  out.avg_min_action = detail::mean(std::move(sum_x), horizon);
  out.avg_max_action = detail::mean(std::move(sum_y), horizon);
  return out;
}

}  // namespace mdl
