#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "test_util.hpp"

using namespace mdl;
using mdl::testing::instance_from_matrix;
using mdl::testing::point_distribution;
using mdl::testing::random_simplex_point;
using mdl::testing::table_over_points;

TEST(SimplexWeights, RejectsInvalidVectors) {
  EXPECT_THROW(SimplexWeights({0.5, 0.6}), InvalidArgument);
  EXPECT_THROW(SimplexWeights({1.5, -0.5}), InvalidArgument);
  EXPECT_THROW(SimplexWeights(std::vector<double>{}), InvalidArgument);
  EXPECT_NO_THROW(SimplexWeights({0.25, 0.75}));
  EXPECT_NO_THROW(SimplexWeights({0.5, 0.5 + 5e-13}));
}

TEST(SimplexWeights, LargeUniformSumsWithinTolerance) {
  const auto w = SimplexWeights::uniform(65536);
  EXPECT_NEAR(accurate_sum(w.values()), 1.0, kSimplexTolerance);
  EXPECT_NO_THROW(SimplexWeights(w.vector()));
}

TEST(DataDistribution, ValidatesProbabilities) {
  EXPECT_THROW(point_distribution({0.5, 0.4}), InvalidArgument);
  EXPECT_THROW(point_distribution({1.2, -0.2}), InvalidArgument);
  EXPECT_THROW(DataDistribution({}, {}), InvalidArgument);
}

TEST(DataDistribution, DrawCounterCountsEverySample) {
  auto d = point_distribution({0.2, 0.3, 0.5});
  Rng rng(1);
  for (int t = 0; t < 17; ++t) d.draw(rng);
  EXPECT_EQ(d.draw_count(), 17u);
  d.reset_draw_count();
  EXPECT_EQ(d.draw_count(), 0u);
}

TEST(DataDistribution, NeverDrawsZeroMassPoints) {
  auto d = point_distribution({0.0, 1.0, 0.0});
  Rng rng(3);
  for (int t = 0; t < 1000; ++t) EXPECT_EQ(d.draw(rng).feature, 1);
}

TEST(DataDistribution, EmpiricalFrequenciesMatch) {
  auto d = point_distribution({0.1, 0.6, 0.3});
  Rng rng(11);
  std::vector<int> counts(3, 0);
  const int n = 200000;
  for (int t = 0; t < n; ++t) ++counts[d.draw(rng).feature];
  for (int x = 0; x < 3; ++x) {
    const double p = d.probabilities()[x];
    EXPECT_NEAR(counts[x] / double(n), p, 4.0 * std::sqrt(p * (1 - p) / n));
  }
}

TEST(Datapoint, DiscreteLabelsArePlusMinusOne) {
  EXPECT_THROW(Datapoint::labeled(0, 0), InvalidArgument);
  EXPECT_THROW(Datapoint::labeled(0, 2), InvalidArgument);
  EXPECT_EQ(Datapoint::labeled(3, 1).code(), 7u);
  EXPECT_EQ(Datapoint::labeled(3, -1).code(), 6u);
}

TEST(FiniteHypothesisClass, RejectsDuplicatesAndBadLabels) {
  EXPECT_THROW(FiniteHypothesisClass::classifiers(2, {{1, -1}, {1, -1}}), InvalidArgument);
  EXPECT_THROW(FiniteHypothesisClass::classifiers(2, {{1, 0}}), InvalidArgument);
  EXPECT_THROW(FiniteHypothesisClass::abstract(0), InvalidArgument);
  EXPECT_THROW(FiniteHypothesisClass::all_labelings(17), ResourceLimit);
  EXPECT_EQ(FiniteHypothesisClass::all_labelings(3).size(), 8u);
}

TEST(TableLoss, RejectsValuesOutsideUnitInterval) {
  EXPECT_THROW(TableLoss(1, 1, {0.0, 1.5}), InvalidArgument);
  EXPECT_THROW(TableLoss(1, 1, {0.0}), InvalidArgument);
}

TEST(ExactRisk, ZeroLossEverywhereIsZero) {
  const auto loss = table_over_points({{0.0, 0.0, 0.0}});
  const auto d = point_distribution({0.2, 0.3, 0.5});
  EXPECT_EQ(exact_risk(HypothesisIndex{0}, d, loss), 0.0);
}

TEST(ExactRisk, TwoPointAverage) {
  const auto loss = table_over_points({{0.0, 1.0}});
  const auto d = point_distribution({0.5, 0.5});
  EXPECT_DOUBLE_EQ(exact_risk(HypothesisIndex{0}, d, loss), 0.5);
}

TEST(ExactRisk, RandomizedHypothesisExpandsByLinearity) {
  // Pure risks 0.3 and 0.7 on a single point; 0.6 * 0.3 + 0.4 * 0.7 = 0.46.
  const auto loss = table_over_points({{0.3}, {0.7}});
  const auto d = point_distribution({1.0});
  EXPECT_NEAR(exact_risk(HypothesisIndex{0}, d, loss), 0.3, 1e-15);
  EXPECT_NEAR(exact_risk(HypothesisIndex{1}, d, loss), 0.7, 1e-15);
  EXPECT_NEAR(exact_risk(SimplexWeights({0.6, 0.4}), d, loss), 0.46, 1e-15);
}

TEST(ExactRisk, GeneratorDistributionIsUnsupported) {
  DataDistribution d([](Rng&) { return Datapoint::labeled(0, 1); });
  const auto loss = table_over_points({{0.5}});
  EXPECT_THROW(exact_risk(HypothesisIndex{0}, d, loss), Unsupported);
  EXPECT_THROW(exact_risk(HypothesisIndex{0}, d, LossFunction{loss}), Unsupported);
}

TEST(ExactRisk, VariantDispatchRejectsMismatchedKinds) {
  const auto d = point_distribution({1.0});
  const LossFunction smooth = SmoothLoss::bilinear(1.0, 0.0, 1.0);
  EXPECT_THROW(exact_risk(HypothesisIndex{0}, d, smooth), Unsupported);
}

TEST(ExactRisk, LinearityHoldsOnRandomInstances) {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t h = 2 + trial % 7, k = 1 + trial % 5;
    std::vector<std::vector<double>> table(h, std::vector<double>(k));
    for (auto& row : table) {
      for (double& v : row) v = uniform01(rng);
    }
    const auto loss = table_over_points(table);
    const auto d = point_distribution(random_simplex_point(k, rng));
    const SimplexWeights w(random_simplex_point(h, rng));
    double expanded = 0.0;
    for (std::size_t f = 0; f < h; ++f) expanded += w[f] * exact_risk(HypothesisIndex{f}, d, loss);
    EXPECT_NEAR(exact_risk(w, d, loss), expanded, 1e-12);
  }
}

TEST(MonteCarloRisk, ConstantLoss) {
  auto d = point_distribution({0.3, 0.7});
  const LossFunction loss = table_over_points({{0.5, 0.5}});
  EXPECT_DOUBLE_EQ(monte_carlo_risk(HypothesisIndex{0}, d, loss, 37, 5), 0.5);
}

TEST(MonteCarloRisk, CloseToExactAndDeterministic) {
  auto d = point_distribution({0.1, 0.2, 0.3, 0.4});
  const auto table = table_over_points({{0.9, 0.1, 0.5, 0.25}});
  const LossFunction loss = table;
  const double exact = exact_risk(HypothesisIndex{0}, d, table);
  const double a = monte_carlo_risk(HypothesisIndex{0}, d, loss, 100000, 42);
  EXPECT_NEAR(a, exact, 0.01);
  EXPECT_EQ(d.draw_count(), 100000u);
  EXPECT_EQ(monte_carlo_risk(HypothesisIndex{0}, d, loss, 100000, 42), a);
  EXPECT_THROW(monte_carlo_risk(HypothesisIndex{0}, d, loss, 0, 42), InvalidArgument);
}

TEST(MonteCarloRisk, UnbiasedOverIndependentSeeds) {
  auto d = point_distribution({0.15, 0.35, 0.5});
  const auto table = table_over_points({{1.0, 0.2, 0.0}});
  const LossFunction loss = table;
  const double exact = exact_risk(HypothesisIndex{0}, d, table);
  std::vector<double> est;
  for (std::uint64_t s = 0; s < 200; ++s) est.push_back(monte_carlo_risk(HypothesisIndex{0}, d, loss, 50, 1000 + s));
  const double mean = std::accumulate(est.begin(), est.end(), 0.0) / est.size();
  double var = 0.0;
  for (double e : est) var += (e - mean) * (e - mean);
  var /= (est.size() - 1);
  EXPECT_LE(std::abs(mean - exact), 4.0 * std::sqrt(var / est.size()));
}

TEST(WorstCaseRisk, SinglePairEqualsExactRisk) {
  auto inst = instance_from_matrix({{0.37}});
  EXPECT_DOUBLE_EQ(worst_case_risk(HypothesisIndex{0}, inst), 0.37);
}

TEST(WorstCaseRisk, MaxOverDistributions) {
  auto inst = instance_from_matrix({{0.2, 0.5, 0.3}});
  EXPECT_DOUBLE_EQ(worst_case_risk(HypothesisIndex{0}, inst), 0.5);
  const auto risks = pair_risks(HypothesisIndex{0}, inst);
  ASSERT_EQ(risks.size(), 3u);
  EXPECT_DOUBLE_EQ(risks[1], 0.5);
}

TEST(WorstCaseRisk, HardPairAtEpsilonOneTenth) {
  // D_x puts 1/2 - 2 y eps on (x, y) and D'_x puts 1/2 + 4 y eps.
  const double eps = 0.1;
  std::vector<Datapoint> pts{Datapoint::labeled(0, 1), Datapoint::labeled(0, -1)};
  DataDistribution d(pts, {0.5 - 2 * eps, 0.5 + 2 * eps});
  DataDistribution dp(pts, {0.5 + 4 * eps, 0.5 - 4 * eps});
  auto cls = FiniteHypothesisClass::classifiers(1, {{-1}, {1}});
  MdlInstance inst({d, dp}, {make_label_loss_table(cls)}, cls);
  const auto risks = pair_risks(HypothesisIndex{0}, inst);
  EXPECT_NEAR(risks[0], 0.3, 1e-15);
  EXPECT_NEAR(risks[1], 0.9, 1e-15);
  EXPECT_NEAR(worst_case_risk(HypothesisIndex{0}, inst), 0.9, 1e-15);
  EXPECT_NEAR(worst_case_risk(BinaryClassifier{{-1}}, inst), 0.9, 1e-15);
}

TEST(MdlInstance, ValidatesShapes) {
  const auto loss = table_over_points({{0.1, 0.2}});
  EXPECT_THROW(MdlInstance({}, {loss}, FiniteHypothesisClass::abstract(1)), InvalidArgument);
  EXPECT_THROW(MdlInstance({point_distribution({1.0})}, {}, FiniteHypothesisClass::abstract(1)), InvalidArgument);
  EXPECT_THROW(MdlInstance({point_distribution({1.0})}, {loss}, FiniteHypothesisClass::abstract(2)), InvalidArgument);
  EXPECT_THROW(MdlInstance({point_distribution({0.2, 0.3, 0.5})}, {loss}, FiniteHypothesisClass::abstract(1)),
               InvalidArgument);
  MdlInstance ok({point_distribution({0.5, 0.5})}, {loss}, FiniteHypothesisClass::abstract(1));
  EXPECT_TRUE(ok.exact_evaluable());
}

TEST(SmoothLoss, BoundedValuesAndGradients) {
  Rng rng(9);
  const auto logistic = SmoothLoss::logistic(std::log1p(std::exp(1.0)), 1.0);
  std::vector<double> g(2);
  for (int t = 0; t < 10000; ++t) {
    // ||theta|| <= 1, ||x|| <= 1.
    const double a = 2 * M_PI * uniform01(rng), b = 2 * M_PI * uniform01(rng);
    const double r1 = std::sqrt(uniform01(rng)), r2 = std::sqrt(uniform01(rng));
    std::vector<double> theta{r1 * std::cos(a), r1 * std::sin(a)};
    const auto z = Datapoint::vector({r2 * std::cos(b), r2 * std::sin(b)}, uniform01(rng) < 0.5 ? -1 : 1);
    const double v = logistic.value(theta, z);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    logistic.gradient(theta, z, g);
    EXPECT_LE(std::hypot(g[0], g[1]), 1.0 + 1e-12);
  }
}

TEST(SmoothLoss, LogisticGradientMatchesFiniteDifferences) {
  const auto loss = SmoothLoss::logistic(2.0, 1.0);
  const auto z = Datapoint::vector({0.3, -0.6}, -1);
  std::vector<double> theta{0.2, 0.4}, g(2);
  loss.gradient(theta, z, g);
  for (std::size_t k = 0; k < 2; ++k) {
    auto up = theta, dn = theta;
    up[k] += 1e-6;
    dn[k] -= 1e-6;
    EXPECT_NEAR(g[k], (loss.value(up, z) - loss.value(dn, z)) / 2e-6, 1e-8);
  }
}

TEST(ParamSpace, ProjectionIsIdempotent) {
  Rng rng(5);
  const std::vector<ConvexParamSpace> spaces{
      ConvexParamSpace::simplex(4, Dgf::entropy), ConvexParamSpace::simplex(4, Dgf::euclidean),
      ConvexParamSpace::ball(3, 0.7), ConvexParamSpace::box({-1.0, 0.0, 2.0}, {1.0, 0.5, 3.0})};
  for (const auto& s : spaces) {
    for (int t = 0; t < 200; ++t) {
      std::vector<double> x(s.dimension());
      for (double& v : x) v = 4.0 * standard_normal(rng);
      const auto p = s.project(x);
      EXPECT_TRUE(s.is_feasible(p));
      const auto pp = s.project(p);
      for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(pp[i], p[i], 1e-12);
    }
  }
}

TEST(ParamSpace, SimplexProjectionMatchesBruteForce) {
  // Compare against minimizing ||u - v|| over a fine grid of Delta_3.
  Rng rng(77);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> v{standard_normal(rng), standard_normal(rng), standard_normal(rng)};
    const auto p = project_to_simplex(v);
    double best = 1e9;
    const int n = 400;
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; a + b <= n; ++b) {
        const double u[3] = {a / double(n), b / double(n), (n - a - b) / double(n)};
        double d = 0.0;
        for (int i = 0; i < 3; ++i) d += (u[i] - v[i]) * (u[i] - v[i]);
        best = std::min(best, d);
      }
    }
    double dp = 0.0;
    for (int i = 0; i < 3; ++i) dp += (p[i] - v[i]) * (p[i] - v[i]);
    EXPECT_LE(dp, best + 1e-12);
  }
}

TEST(ParamSpace, BregmanIsNonnegativeAndBoundedByRadius) {
  Rng rng(13);
  const std::vector<ConvexParamSpace> spaces{
      ConvexParamSpace::simplex(5, Dgf::entropy), ConvexParamSpace::simplex(5, Dgf::euclidean),
      ConvexParamSpace::ball(2, 1.5), ConvexParamSpace::box({0.0, -2.0}, {1.0, 2.0})};
  for (const auto& s : spaces) {
    const auto c = s.center();
    for (int t = 0; t < 500; ++t) {
      std::vector<double> a(s.dimension()), b(s.dimension());
      for (double& v : a) v = standard_normal(rng);
      for (double& v : b) v = standard_normal(rng);
      auto u = s.project(a), w = s.project(b);
      if (s.dgf() == Dgf::entropy) {
        u = random_simplex_point(s.dimension(), rng);
        w = random_simplex_point(s.dimension(), rng);
      }
      EXPECT_GE(s.bregman(w, u), 0.0);
      EXPECT_LE(s.bregman(c, u), s.bregman_radius() + 1e-12);
      // Definition V(w,u) = omega(u) - omega(w) - <omega'(w), u - w>.
      const auto gw = s.omega_gradient(w);
      double lin = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) lin += gw[i] * (u[i] - w[i]);
      EXPECT_NEAR(s.bregman(w, u), s.omega(u) - s.omega(w) - lin, 1e-10);
    }
  }
}

TEST(ParamSpace, EntropyRadiusIsLogK) {
  // The radius is attained at vertices: KL(e_i || uniform) = log k.
  for (std::size_t k : {2u, 3u, 7u}) {
    const auto s = ConvexParamSpace::simplex(k, Dgf::entropy);
    EXPECT_NEAR(s.bregman_radius(), std::log(double(k)), 1e-15);
    std::vector<double> e(k, 0.0);
    e[0] = 1.0;
    EXPECT_NEAR(s.bregman(s.center(), e), std::log(double(k)), 1e-12);
    Rng rng(k);
    for (int t = 0; t < 1000; ++t) EXPECT_LE(s.bregman(s.center(), random_simplex_point(k, rng)), s.bregman_radius());
  }
}

TEST(ParamSpace, EuclideanRadiiAreAttained) {
  const auto ball = ConvexParamSpace::ball(3, 2.0);
  EXPECT_DOUBLE_EQ(ball.bregman_radius(), 2.0);
  EXPECT_DOUBLE_EQ(ball.bregman(ball.center(), std::vector<double>{2.0, 0.0, 0.0}), 2.0);
  const auto box = ConvexParamSpace::box({0.0, 0.0}, {2.0, 4.0});
  EXPECT_DOUBLE_EQ(box.bregman(box.center(), std::vector<double>{0.0, 4.0}), box.bregman_radius());
  const auto sx = ConvexParamSpace::simplex(4, Dgf::euclidean);
  EXPECT_NEAR(sx.bregman(sx.center(), std::vector<double>{1, 0, 0, 0}), sx.bregman_radius(), 1e-15);
}

TEST(ParamSpace, EntropyOutsideSimplexAndMissingDgf) {
  EXPECT_THROW(ConvexParamSpace::ball(2, 1.0, Dgf::entropy), Unsupported);
  EXPECT_THROW(ConvexParamSpace::box({0.0}, {1.0}, Dgf::entropy), Unsupported);
  const auto none = ConvexParamSpace::ball(2, 1.0, Dgf::none);
  EXPECT_THROW(none.bregman_radius(), Unsupported);
  EXPECT_NO_THROW(none.project(std::vector<double>{3.0, 4.0}));
}
