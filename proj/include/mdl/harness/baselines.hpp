#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "mdl/core/instance.hpp"
#include "mdl/core/matrix_game.hpp"
#include "mdl/core/risk.hpp"
#include "mdl/random.hpp"
#include "mdl/reductions/gdro.hpp"

namespace mdl {

// Empirical distribution of m i.i.d. draws from d (draw counter advances by m).
inline DataDistribution draw_empirical(DataDistribution& d, std::uint64_t m, Rng& rng) {
  if (m == 0) throw InvalidArgument("draw_empirical: m must be >= 1");
  if (!d.has_finite_support()) {
    std::vector<Datapoint> batch;
    batch.reserve(m);
    for (std::uint64_t k = 0; k < m; ++k) batch.push_back(d.draw(rng));
    return make_empirical_distribution(batch);
  }
  std::vector<std::uint64_t> counts(d.support_size(), 0);
  for (std::uint64_t k = 0; k < m; ++k) ++counts[d.draw_index(rng)];
  std::vector<Datapoint> support;
  std::vector<double> probs;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    support.push_back(d.support()[i]);
    probs.push_back(static_cast<double>(counts[i]) / static_cast<double>(m));
  }
  return DataDistribution(std::move(support), std::move(probs));
}

enum class BatchMode { mixed, pure };

struct BatchErmResult {
  std::vector<double> hypothesis;  // weights over H, or a parameter vector
  std::uint64_t samples_used = 0;
  double empirical_value = 0.0;  // empirical worst-group risk of `hypothesis`
};

namespace detail {

// Minimizer of the empirical worst-group risk over a grid of spacing h on a
// 2-dimensional parameter set.
inline std::vector<double> grid_minimizer_2d(const MdlInstance& emp, double h) {
  const auto& space = emp.param_space();
  double lo0 = -space.radius(), hi0 = space.radius(), lo1 = lo0, hi1 = hi0;
  if (space.geometry() == Geometry::box) {
    lo0 = space.lower()[0];
    hi0 = space.upper()[0];
    lo1 = space.lower()[1];
    hi1 = space.upper()[1];
  } else if (space.geometry() == Geometry::simplex) {
    lo0 = lo1 = 0.0;
    hi0 = hi1 = 1.0;
  }
  std::vector<double> best = space.center();
  double best_v = worst_case_risk(best, emp);
  const auto steps0 = static_cast<long>(std::floor((hi0 - lo0) / h));
  const auto steps1 = static_cast<long>(std::floor((hi1 - lo1) / h));
  for (long a = 0; a <= steps0; ++a) {
    for (long b = 0; b <= steps1; ++b) {
      std::vector<double> x{lo0 + a * h, lo1 + b * h};
      if (!space.is_feasible(x, 0.0)) continue;
      const double v = worst_case_risk(x, emp);
      if (v < best_v) {
        best_v = v;
        best = std::move(x);
      }
    }
  }
  return best;
}

}  // namespace detail

// Batch baseline: m samples from every distribution up front, then the
// minimizer of the empirical worst-group risk. `mixed` solves the empirical
// game over Delta(H) (or over a simplex for linear losses); `pure` picks the
// best single hypothesis. Other convex instances use a grid in two dimensions.
inline BatchErmResult batch_erm_baseline(MdlInstance& instance, std::uint64_t m, std::uint64_t seed,
                                         BatchMode mode = BatchMode::mixed) {
  if (m < 1) throw InvalidArgument("batch_erm_baseline: m must be >= 1");
  instance.reset_draw_counts();
  Rng rng = substream(seed, Stream::learner_sampling);
  std::vector<DataDistribution> ds;
  for (auto& d : instance.distributions()) ds.push_back(draw_empirical(d, m, rng));
  const MdlInstance emp(std::move(ds), instance.losses(), instance.space());

  BatchErmResult out;
  out.samples_used = instance.total_draws();
  if (has_matrix_form(emp)) {
    const Matrix risks = risk_matrix(emp);
    if (mode == BatchMode::mixed) {
      const auto g = solve_matrix_game(risks);
      out.hypothesis = g.row_strategy.vector();
    } else {
      std::size_t best = 0;
      double best_v = 2.0;
      for (std::size_t r = 0; r < risks.rows; ++r) {
        double v = 0.0;
        for (std::size_t c = 0; c < risks.cols; ++c) v = std::max(v, risks(r, c));
        if (v < best_v) {
          best_v = v;
          best = r;
        }
      }
      out.hypothesis.assign(risks.rows, 0.0);
      out.hypothesis[best] = 1.0;
    }
    out.empirical_value = max_column_payoff(risks, out.hypothesis);
    return out;
  }
  if (emp.has_finite_class()) throw Unsupported("batch_erm_baseline: instance is not exactly evaluable");
  if (emp.param_space().dimension() != 2) {
    throw Unsupported("batch_erm_baseline: grid minimizer needs a 2-dimensional parameter space");
  }
  out.hypothesis = detail::grid_minimizer_2d(emp, 0.01);
  out.empirical_value = worst_case_risk(out.hypothesis, emp);
  return out;
}

// Worst-case risk of a batch/mdl output against the true instance: mixtures
// for finite classes, parameter vectors otherwise.
inline double output_worst_risk(const std::vector<double>& h, const MdlInstance& instance) {
  if (instance.has_finite_class()) return worst_case_risk(SimplexWeights::normalized(h), instance);
  return worst_case_risk(h, instance);
}

}  // namespace mdl
