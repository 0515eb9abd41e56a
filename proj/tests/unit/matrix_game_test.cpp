#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "test_util.hpp"

using namespace mdl;
using mdl::testing::instance_from_matrix;
using mdl::testing::random_matrix;
using mdl::testing::to_matrix;

namespace {

// Gaussian elimination with partial pivoting; nullopt if singular.
std::optional<std::vector<double>> solve_linear(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (std::abs(a[piv][c]) < 1e-12) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

// Independent oracle: min_p max_c (p^T M)_c by enumerating every vertex of
// {(p, v) : p^T M_c <= v, p >= 0, sum p = 1}.
double vertex_enumeration_value(const std::vector<std::vector<double>>& m) {
  const std::size_t rows = m.size(), cols = m.front().size();
  const std::size_t ineq = cols + rows;
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> pick(ineq, false);
  std::fill(pick.begin(), pick.begin() + rows, true);
  do {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (std::size_t k = 0; k < ineq; ++k) {
      if (!pick[k]) continue;
      std::vector<double> row(rows + 1, 0.0);
      if (k < cols) {
        for (std::size_t r = 0; r < rows; ++r) row[r] = m[r][k];
        row[rows] = -1.0;
      } else {
        row[k - cols] = 1.0;
      }
      a.push_back(row);
      b.push_back(0.0);
    }
    std::vector<double> sum(rows + 1, 1.0);
    sum[rows] = 0.0;
    a.push_back(sum);
    b.push_back(1.0);
    const auto sol = solve_linear(a, b);
    if (!sol) continue;
    const auto& x = *sol;
    bool feasible = true;
    for (std::size_t r = 0; r < rows; ++r) feasible &= x[r] >= -1e-10;
    for (std::size_t c = 0; c < cols && feasible; ++c) {
      double s = 0.0;
      for (std::size_t r = 0; r < rows; ++r) s += x[r] * m[r][c];
      feasible &= s <= x[rows] + 1e-10;
    }
    if (feasible) best = std::min(best, x[rows]);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

// Coarse exhaustive grid over Delta_rows with step 1/n.
double grid_value(const std::vector<std::vector<double>>& m, int n) {
  const std::size_t rows = m.size(), cols = m.front().size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> counts(rows, 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == rows) {
      counts[i] = left;
      double worst = -1.0;
      for (std::size_t c = 0; c < cols; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < rows; ++r) s += counts[r] * m[r][c];
        worst = std::max(worst, s / n);
      }
      best = std::min(best, worst);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      counts[i] = k;
      self(self, i + 1, left - k);
    }
  };
  rec(rec, 0, n);
  return best;
}

}  // namespace

TEST(BruteForceOpt, SingletonClassEqualsWorstCaseRisk) {
  auto inst = instance_from_matrix({{0.2, 0.7, 0.4}});
  const auto opt = brute_force_opt(inst);
  EXPECT_NEAR(opt.value, worst_case_risk(HypothesisIndex{0}, inst), 1e-12);
}

TEST(BruteForceOpt, MatchingPenniesIsOneHalf) {
  auto inst = instance_from_matrix({{0.0, 1.0}, {1.0, 0.0}});
  const auto opt = brute_force_opt(inst);
  EXPECT_NEAR(opt.value, 0.5, 1e-12);
  EXPECT_NEAR(opt.weights[0], 0.5, 1e-12);
  EXPECT_NEAR(optimality_gap(SimplexWeights::uniform(2), inst), 0.0, 1e-12);
}

TEST(BruteForceOpt, RandomFiveByThreeMatchesIndependentOracles) {
  const auto m = random_matrix(5, 3, 7);
  auto inst = instance_from_matrix(m);
  const auto opt = brute_force_opt(inst);
  const double vertex = vertex_enumeration_value(m);
  EXPECT_NEAR(opt.value, vertex, 1e-4);
  // A grid minimum can only sit above the true value, by at most the
  // resolution times the largest entry.
  const double grid = grid_value(m, 60);
  EXPECT_GE(grid, opt.value - 1e-12);
  EXPECT_LE(grid, opt.value + 2.0 / 60);
}

TEST(BruteForceOpt, SaddlePointPropertyOnRandomGames) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const std::size_t rows = 1 + seed % 9, cols = 1 + (seed * 7) % 6;
    const auto m = random_matrix(rows, cols, seed);
    auto inst = instance_from_matrix(m);
    const auto opt = brute_force_opt(inst);
    const auto mat = to_matrix(m);
    EXPECT_NEAR(max_column_payoff(mat, opt.weights.values()), opt.value, 1e-6);
    for (std::size_t r = 0; r < rows; ++r) EXPECT_GE(worst_case_risk(HypothesisIndex{r}, inst), opt.value - 1e-9);
    EXPECT_LE(equilibrium_gap(mat, opt.weights.values(), opt.auditor_weights.values()), 1e-6);
    EXPECT_LE(optimality_gap(opt.weights, inst, opt.value), 1e-6);
    EXPECT_GE(optimality_gap(opt.weights, inst, opt.value), -1e-9);
    if (rows + cols <= 11) {
      EXPECT_NEAR(opt.value, vertex_enumeration_value(m), 1e-9) << "seed " << seed;
    }
  }
}

TEST(BruteForceOpt, DegenerateMatricesDoNotCycle) {
  const std::vector<std::vector<std::vector<double>>> cases{
      {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}},
      {{0.0, 0.0, 0.0}},
      {{1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.0, 1.0}},
      {{0.3, 0.3, 0.3, 0.3}, {0.3, 0.3, 0.3, 0.3}},
      {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {0.5, 0.5, 0.5}},
  };
  for (const auto& m : cases) {
    auto inst = instance_from_matrix(m);
    const auto opt = brute_force_opt(inst);
    EXPECT_NEAR(opt.value, vertex_enumeration_value(m), 1e-9);
  }
}

TEST(BruteForceOpt, NegativeAndLargeEntries) {
  const auto g = solve_matrix_game(to_matrix({{-3.0, 5.0}, {4.0, -2.0}}));
  // Mixed equilibrium of a 2x2 game: v = (ad - bc) / (a + d - b - c).
  EXPECT_NEAR(g.value, (-3.0 * -2.0 - 5.0 * 4.0) / (-3.0 - 2.0 - 5.0 - 4.0), 1e-12);
}

TEST(BruteForceOpt, RejectsOversizeAndNonMatrixInstances) {
  EXPECT_THROW(solve_matrix_game(Matrix(kMaxGameEntries + 1, 1)), ResourceLimit);
  EXPECT_THROW(solve_matrix_game(Matrix()), InvalidArgument);
  std::vector<DataDistribution> ds{DataDistribution([](Rng&) { return Datapoint::vector({0.0, 1.0}, 1); })};
  MdlInstance logistic(std::move(ds), {SmoothLoss::logistic(1.0, 1.0)}, ConvexParamSpace::ball(2, 1.0));
  EXPECT_THROW(brute_force_opt(logistic), Unsupported);
}

TEST(BruteForceOpt, LinearLossesOnSimplexUseVertices) {
  // <theta, z> over Delta_3 with one point z: the optimum is the smallest
  // coordinate, attained at a vertex.
  std::vector<Datapoint> pts{Datapoint::vector({0.6, 0.2, 0.9})};
  MdlInstance inst({DataDistribution(pts, {1.0})}, {SmoothLoss::bilinear(1.0, 0.0, 1.0)},
                   ConvexParamSpace::simplex(3, Dgf::entropy));
  const auto opt = brute_force_opt(inst);
  EXPECT_NEAR(opt.value, 0.2, 1e-12);
  EXPECT_NEAR(opt.weights[1], 1.0, 1e-9);
}

TEST(EquilibriumGap, ZeroExactlyAtEquilibrium) {
  const auto m = to_matrix({{0.0, 1.0}, {1.0, 0.0}});
  const std::vector<double> half{0.5, 0.5};
  EXPECT_NEAR(equilibrium_gap(m, half, half), 0.0, 1e-15);
  const std::vector<double> pure{1.0, 0.0};
  EXPECT_NEAR(equilibrium_gap(m, pure, half), 0.5, 1e-15);
}

TEST(EpsOptimal, ToleranceRule) {
  EXPECT_TRUE(is_eps_optimal(0.1 + 5e-7, 0.1));
  EXPECT_FALSE(is_eps_optimal(0.1 + 2e-6, 0.1));
}
