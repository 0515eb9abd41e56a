#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "mdl/core/instance.hpp"
#include "mdl/core/risk.hpp"
#include "mdl/error.hpp"
#include "mdl/simplex.hpp"

namespace mdl {

// Certification tolerance on the duality gap of an exact game solution.
inline constexpr double kGameTolerance = 1e-6;
// Largest risk matrix brute_force_opt will solve.
inline constexpr std::size_t kMaxGameEntries = std::size_t{1} << 17;

struct GameSolution {
  double value = 0.0;          // max_c (p^T M)_c for the returned p
  SimplexWeights row_strategy;     // minimizer's optimal mixed strategy
  SimplexWeights column_strategy;  // maximizer's optimal mixed strategy
  double duality_gap = 0.0;    // max_c (p^T M)_c - min_r (M q)_r
};

// Row player's best guaranteed cost against `q` and column player's best
// response against `p`.
inline double max_column_payoff(const Matrix& m, std::span<const double> p) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < m.cols; ++c) {
    long double s = 0.0L;
    for (std::size_t r = 0; r < m.rows; ++r) s += static_cast<long double>(p[r]) * m(r, c);
    best = std::max(best, static_cast<double>(s));
  }
  return best;
}

inline double min_row_payoff(const Matrix& m, std::span<const double> q) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < m.rows; ++r) {
    long double s = 0.0L;
    for (std::size_t c = 0; c < m.cols; ++c) s += static_cast<long double>(q[c]) * m(r, c);
    best = std::min(best, static_cast<double>(s));
  }
  return best;
}

// Exploitability of the profile (p, q): 0 iff it is an exact equilibrium.
inline double equilibrium_gap(const Matrix& m, std::span<const double> p, std::span<const double> q) {
  return max_column_payoff(m, p) - min_row_payoff(m, q);
}

namespace detail {

// Dense tableau simplex for  max 1^T x  s.t.  A x <= 1, x >= 0  with A > 0.
// Returns primal x and dual y. Dantzig pricing, switching to Bland's rule
// after a run of degenerate pivots.
struct PackingLpSolution {
  std::vector<double> x;
  std::vector<double> y;
};

inline PackingLpSolution solve_packing_lp(const std::vector<double>& a, std::size_t m, std::size_t n) {
  const std::size_t width = n + m + 1;
  std::vector<double> t((m + 1) * width, 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return t[r * width + c]; };
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) at(r, j) = a[r * n + j];
    at(r, n + r) = 1.0;
    at(r, width - 1) = 1.0;
  }
  for (std::size_t j = 0; j < n; ++j) at(m, j) = -1.0;
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) basis[r] = n + r;

  constexpr double eps = 1e-12;
  const std::size_t max_iters = 50 * (n + m) + 1000;
  std::size_t degenerate_run = 0;
  double last_objective = 0.0;
  for (std::size_t iter = 0;; ++iter) {
    if (iter > max_iters) throw ContractViolation("matrix game LP did not converge");
    const bool bland = degenerate_run > m + 10;
    std::size_t enter = width;
    double most_negative = -eps;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (at(m, j) < most_negative) {
        enter = j;
        if (bland) break;
        most_negative = at(m, j);
      }
    }
    if (enter == width) break;

    std::size_t leave = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      if (at(r, enter) > eps) {
        const double ratio = at(r, width - 1) / at(r, enter);
        if (ratio < best_ratio - 1e-15 || (ratio <= best_ratio + 1e-15 && leave < m && basis[r] < basis[leave])) {
          best_ratio = ratio;
          leave = r;
        }
      }
    }
    if (leave == m) throw ContractViolation("matrix game LP is unbounded");

    const double pivot = at(leave, enter);
    for (std::size_t c = 0; c < width; ++c) at(leave, c) /= pivot;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const double factor = at(r, enter);
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c < width; ++c) at(r, c) -= factor * at(leave, c);
    }
    basis[leave] = enter;

    const double objective = at(m, width - 1);
    degenerate_run = objective > last_objective + 1e-15 ? 0 : degenerate_run + 1;
    last_objective = objective;
  }

  PackingLpSolution sol{std::vector<double>(n, 0.0), std::vector<double>(m, 0.0)};
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) sol.x[basis[r]] = std::max(at(r, width - 1), 0.0);
  }
  for (std::size_t r = 0; r < m; ++r) sol.y[r] = std::max(at(m, n + r), 0.0);
  return sol;
}

}  // namespace detail

// Exact value of the zero-sum matrix game min_p max_q p^T M q (rows
// minimize). Solved as a linear program; the result is certified by
// recomputing both players' guarantees and checking the duality gap.
inline GameSolution solve_matrix_game(const Matrix& m) {
  if (m.rows == 0 || m.cols == 0) throw InvalidArgument("solve_matrix_game: empty matrix");
  if (m.rows * m.cols > kMaxGameEntries) throw ResourceLimit("solve_matrix_game: matrix too large for exact solution");
  double lo = std::numeric_limits<double>::infinity();
  for (double v : m.data) {
    if (!std::isfinite(v)) throw InvalidArgument("solve_matrix_game: non-finite entry");
    lo = std::min(lo, v);
  }
  // Shift so every entry is >= 1; min_p max_c p^T B = v' is then found from
  //   max 1^T x  s.t.  B^T x <= 1,  x >= 0,  with v' = 1 / sum(x), p = v' x.
  const double shift = 1.0 - lo;
  std::vector<double> a(m.cols * m.rows);
  for (std::size_t c = 0; c < m.cols; ++c) {
    for (std::size_t r = 0; r < m.rows; ++r) a[c * m.rows + r] = m(r, c) + shift;
  }
  const auto lp = detail::solve_packing_lp(a, m.cols, m.rows);
  GameSolution out;
  out.row_strategy = SimplexWeights::normalized(lp.x);
  out.column_strategy = SimplexWeights::normalized(lp.y);
  out.value = max_column_payoff(m, out.row_strategy.values());
  out.duality_gap = out.value - min_row_payoff(m, out.column_strategy.values());
  if (out.duality_gap > kGameTolerance) throw ContractViolation("solve_matrix_game: solution failed certification");
  return out;
}

struct OptResult {
  double value = 0.0;             // OPT
  SimplexWeights weights;         // optimal randomized hypothesis (or simplex point)
  SimplexWeights auditor_weights; // optimal mixture over (D_i, l_j)
  double duality_gap = 0.0;
};

// OPT := min_h max_{(D,l)} R_{D,l}(h) over randomized hypotheses, solved
// exactly. Independent oracle for every optimality check in the library.
inline OptResult brute_force_opt(const MdlInstance& instance) {
  if (instance.has_finite_class() && !instance.exact_evaluable()) {
    throw Unsupported("brute_force_opt: instance is not exactly evaluable");
  }
  if (!instance.has_finite_class() && !has_matrix_form(instance)) {
    throw Unsupported("brute_force_opt: infinite hypothesis space without a finite matrix form");
  }
  if (instance.learner_dimension() * instance.num_pairs() > kMaxGameEntries) {
    throw ResourceLimit("brute_force_opt: risk matrix too large");
  }
  const Matrix m = risk_matrix(instance);
  auto g = solve_matrix_game(m);
  return OptResult{g.value, std::move(g.row_strategy), std::move(g.column_strategy), g.duality_gap};
}

// worst_case_risk(h) - OPT. Accepts SimplexWeights / HypothesisIndex for
// finite classes and parameter vectors for linear simplex instances.
template <class H>
double optimality_gap(const H& h, const MdlInstance& instance, double opt_value) {
  return worst_case_risk(h, instance) - opt_value;
}

template <class H>
double optimality_gap(const H& h, const MdlInstance& instance) {
  return optimality_gap(h, instance, brute_force_opt(instance).value);
}

// Documented acceptance rule for epsilon-optimality in floating point.
inline bool is_eps_optimal(double gap, double eps) { return gap <= eps + kGameTolerance; }

}  // namespace mdl
