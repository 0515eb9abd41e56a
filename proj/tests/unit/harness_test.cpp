#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "mdl/harness.hpp"
#include "test_util.hpp"

using namespace mdl;

namespace {

std::string csv(const std::vector<RunRecord>& r) {
  std::ostringstream o;
  write_records_csv(r, o);
  return o.str();
}

std::string json_text(const MdlInstance& inst) {
  std::ostringstream o;
  write_instance(inst, o);
  return o.str();
}

MdlInstance round_trip(const MdlInstance& inst) {
  std::istringstream in(json_text(inst));
  return read_instance(in);
}

ExperimentConfig small_config(const std::string& algorithm) {
  ExperimentConfig c;
  c.algorithm = algorithm;
  c.instance.family = "random-agnostic";
  c.instance.class_size = 10;
  c.instance.n = 4;
  c.instance.support = 5;
  c.instance.seed = 7;
  c.rounds = 200;
  c.batch_m = 50;
  c.seeds = {1, 2, 3};
  c.threads = 1;
  return c;
}

std::string config_field(const std::string& text) {
  try {
    parse_config_string(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

}  // namespace

// --- instance documents

TEST(InstanceJson, FiniteRoundTripIsExact) {
  const auto a = make_random_agnostic(10, 4, 5, 7);
  const auto b = round_trip(a);
  EXPECT_EQ(json_text(a), json_text(b));
  const Matrix ra = risk_matrix(a), rb = risk_matrix(b);
  for (std::size_t r = 0; r < ra.rows; ++r) {
    for (std::size_t c = 0; c < ra.cols; ++c) EXPECT_EQ(ra(r, c), rb(r, c));
  }
}

TEST(InstanceJson, LowerBoundAndCoinRoundTrip) {
  for (const auto& a : {make_lower_bound_family(2, 3, 0.1, LowerBoundVariant::at(1, 2), 1),
                        make_coin_instance(4, 0.1, 2, 1)}) {
    const auto b = round_trip(a);
    EXPECT_EQ(json_text(a), json_text(b));
    EXPECT_EQ(brute_force_opt(a).value, brute_force_opt(b).value);
  }
}

TEST(InstanceJson, ConvexRoundTripIsExact) {
  for (auto fam : {ConvexFamily::bilinear, ConvexFamily::logistic}) {
    const auto a = make_convex_gdro(3, 2, fam, 5);
    const auto b = round_trip(a);
    EXPECT_EQ(json_text(a), json_text(b));
    Rng rng(11);
    for (int k = 0; k < 20; ++k) {
      auto theta = a.param_space().center();
      for (double& v : theta) v += 0.3 * (uniform01(rng) - 0.5);
      theta = a.param_space().project(theta);
      EXPECT_EQ(worst_case_risk(theta, a), worst_case_risk(theta, b));
    }
  }
}

TEST(InstanceJson, RejectsMalformedDocuments) {
  for (const char* text : {"", "{}", "[1,2]", R"({"format":"mdl-instance","version":99})", "{not json"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_instance(in), InvalidArgument) << text;
  }
}

TEST(InstanceJson, SolveResultFields) {
  auto inst = make_random_agnostic(5, 3, 4, 2);
  const auto r = mdl_solve(inst, 30, 9);
  const Json j = solve_result_to_json(r);
  EXPECT_EQ(j.at("rounds").get<std::uint64_t>(), 30u);
  EXPECT_EQ(j.at("total_samples").get<std::uint64_t>(), 60u);
  EXPECT_EQ(j.at("avg_min_action").size(), 5u);
  EXPECT_EQ(j.at("avg_max_action").size(), 3u);
}

// --- config documents

TEST(Config, ParsesFlatDocument) {
  const auto c = parse_config_string(
      "# comment\n"
      "family = \"lower-bound\"\n"
      "n = 8\n"
      "w = 2\n"
      "algorithm = batch-erm\n"
      "eps = 0.05\n"
      "seeds = [2, 4, 8]\n"
      "values = 2,4,8\n"
      "batch_m = 12\n"
      "timing = true\n");
  EXPECT_EQ(c.instance.family, "lower-bound");
  EXPECT_EQ(c.instance.n, 8u);
  EXPECT_EQ(c.algorithm, "batch-erm");
  EXPECT_DOUBLE_EQ(c.eps, 0.05);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{2, 4, 8}));
  EXPECT_EQ(c.values, (std::vector<double>{2, 4, 8}));
  EXPECT_EQ(c.batch_m, std::optional<std::uint64_t>(12));
  EXPECT_TRUE(c.timing);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(config_field("bogus = 1\n"), "bogus");
  EXPECT_EQ(config_field("eps = abc\n"), "eps");
  EXPECT_EQ(config_field("eps = 1.5\n"), "eps");
  EXPECT_EQ(config_field("delta = 0\n"), "delta");
  EXPECT_EQ(config_field("seeds = []\n"), "seeds");
  EXPECT_EQ(config_field("n = -3\n"), "n");
  EXPECT_EQ(config_field("algorithm = sgd\n"), "algorithm");
  EXPECT_EQ(config_field("format = xml\n"), "format");
  EXPECT_EQ(config_field("[section]\nn = 2\n"), "section");
  EXPECT_EQ(config_field("eps = 0.2\n"), "<none>");
}

TEST(Config, ConfigErrorExitCode) { EXPECT_EQ(exit_code(ConfigError("eps", "bad")), 2); }

TEST(Config, InstanceSpecRoundTrip) {
  InstanceSpec s;
  s.family = "coin";
  s.n = 6;
  s.gap = 0.07;
  s.variant = "3";
  s.seed = 42;
  const auto c = parse_config_string(instance_spec_to_config(s));
  EXPECT_EQ(json_text(build_instance(c.instance)), json_text(build_instance(s)));
}

TEST(Config, RandomVariantDependsOnRunSeedOnly) {
  InstanceSpec s;
  s.family = "lower-bound";
  s.n = 8;
  s.variant = "random";
  EXPECT_EQ(json_text(build_instance(s, 5)), json_text(build_instance(s, 5)));
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 30; ++seed) seen.insert(json_text(build_instance(s, seed)));
  EXPECT_GT(seen.size(), 2u);
}

// --- run_experiment

TEST(Experiment, OneRecordPerSeed) {
  const auto recs = run_experiment(small_config("mdl"));
  ASSERT_EQ(recs.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(recs[k].run_id, k);
    EXPECT_EQ(recs[k].seed, k + 1);
    EXPECT_EQ(recs[k].n, 4u);
    EXPECT_EQ(recs[k].size, 10u);
    EXPECT_FALSE(std::isnan(recs[k].opt_gap));
    EXPECT_GE(recs[k].opt_gap, -kGameTolerance);
  }
}

TEST(Experiment, CsvHeaderIsStable) {
  const auto text = csv(run_experiment(small_config("mdl")));
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "run_id,algorithm,n,size,eps_target,samples_used,opt_gap,worst_group_risk,wall_ms,seed");
}

TEST(Experiment, DeterministicAcrossRunsAndThreadCounts) {
  for (const char* alg : {"mdl", "batch-erm"}) {
    auto c = small_config(alg);
    const auto a = csv(run_experiment(c));
    EXPECT_EQ(a, csv(run_experiment(c)));
    c.threads = 3;
    EXPECT_EQ(a, csv(run_experiment(c)));
    std::ostringstream j1, j2;
    write_records_json(run_experiment(c), j1);
    write_records_json(run_experiment(c), j2);
    EXPECT_EQ(j1.str(), j2.str());
  }
}

TEST(Experiment, SampleAccountingMatchesDrawCounters) {
  auto c = small_config("mdl");
  for (const auto& r : run_experiment(c)) EXPECT_EQ(r.samples_used, 2u * *c.rounds);
  // batch-erm: n m exactly
  c = small_config("batch-erm");
  for (const auto& r : run_experiment(c)) EXPECT_EQ(r.samples_used, 4u * *c.batch_m);
  // independently replay one run and read the counters
  auto inst = build_instance(c.instance, 1);
  const auto b = batch_erm_baseline(inst, 50, 1);
  EXPECT_EQ(b.samples_used, inst.total_draws());
  for (auto k : inst.draw_counts()) EXPECT_EQ(k, 50u);
}

TEST(Experiment, TheoreticalHorizonWhenRoundsUnset) {
  auto c = small_config("mdl");
  c.rounds.reset();
  c.t_scale = 0.02;
  c.seeds = {1};
  const auto inst = build_instance(c.instance, 1);
  const auto recs = run_experiment(c);
  EXPECT_EQ(recs[0].samples_used, 2 * mdl_horizon(inst, c.eps, c.delta, c.t_scale));
}

TEST(Experiment, GapUnavailableWithoutExactOpt) {
  ExperimentConfig c;
  c.algorithm = "gdro";
  c.instance.family = "logistic";
  c.instance.dim = 2;
  c.instance.n = 2;
  c.instance.seed = 3;
  c.rounds = 200;
  c.seeds = {1};
  const auto recs = run_experiment(c);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_TRUE(std::isnan(recs[0].opt_gap));
  EXPECT_FALSE(std::isnan(recs[0].worst_group_risk));
  EXPECT_NE(csv(recs).find(",NA,"), std::string::npos);
  std::ostringstream j;
  write_records_json(recs, j);
  EXPECT_NE(j.str().find("\"opt_gap\": null"), std::string::npos);
}

TEST(Experiment, BadConfigRaisesConfigError) {
  auto c = small_config("mdl");
  c.seeds.clear();
  EXPECT_THROW(run_experiment(c), ConfigError);
  c = small_config("mdl");
  c.instance.family = "nope";
  EXPECT_THROW(run_experiment(c), ConfigError);
}

TEST(Experiment, ParallelMapRethrowsLowestFailure) {
  try {
    parallel_map<int>(6, 3, [](std::size_t k) -> int {
      if (k == 2 || k == 4) throw InvalidArgument("fail " + std::to_string(k));
      return static_cast<int>(k);
    });
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_STREQ(e.what(), "fail 2");
  }
}

// --- batch baseline

TEST(BatchErm, LargeBatchConvergesToPureOptimum) {
  // pure mode vs the best single hypothesis under the true risks
  for (std::uint64_t seed : {1, 2, 3}) {
    auto inst = make_random_agnostic(8, 3, 4, seed);
    const Matrix risks = risk_matrix(inst);
    double best = 2.0;
    for (std::size_t r = 0; r < risks.rows; ++r) {
      double v = 0.0;
      for (std::size_t c = 0; c < risks.cols; ++c) v = std::max(v, risks(r, c));
      best = std::min(best, v);
    }
    const auto b = batch_erm_baseline(inst, 200000, seed, BatchMode::pure);
    EXPECT_LE(output_worst_risk(b.hypothesis, inst), best + 0.01);
  }
}

TEST(BatchErm, LargeBatchMixedApproachesOpt) {
  auto inst = make_random_agnostic(10, 4, 5, 7);
  const double opt = brute_force_opt(inst).value;
  const auto b = batch_erm_baseline(inst, 200000, 3);
  EXPECT_LE(output_worst_risk(b.hypothesis, inst) - opt, 0.01);
}

TEST(BatchErm, ConvexGridCase) {
  auto inst = make_convex_gdro(2, 2, ConvexFamily::logistic, 3);
  const auto b = batch_erm_baseline(inst, 4000, 1);
  EXPECT_EQ(b.samples_used, 8000u);
  EXPECT_LE(output_worst_risk(b.hypothesis, inst), 0.47599279820533436 + 0.02);
}

TEST(BatchErm, RejectsZeroBatch) {
  auto inst = make_random_agnostic(4, 2, 3, 1);
  EXPECT_THROW(batch_erm_baseline(inst, 0, 1), InvalidArgument);
}

// --- samples-to-target

TEST(SamplesToTarget, OvershootBound) {
  // If budget T reaches the target at seed s, the recorded sample count is
  // at most 2 T 2. Checked for every level that succeeds at its own seed.
  auto inst = make_random_agnostic(10, 4, 5, 7);
  const double opt = brute_force_opt(inst).value;
  for (std::uint64_t seed : {1, 2, 3, 4}) {
    const auto s = mdl_samples_to_target(inst, 0.05, opt, seed, 8, 16);
    ASSERT_TRUE(s.reached);
    EXPECT_EQ(s.samples, 2 * s.budget);
    EXPECT_EQ(s.budget, std::uint64_t{8} << s.level);
    for (std::uint32_t level = 0; level < s.level; ++level) {
      MdlInstance copy = inst;
      const auto r = mdl_solve(copy, std::uint64_t{8} << level, derive_seed(seed, level));
      EXPECT_GT(output_worst_risk(r.avg_min_action, inst) - opt, 0.05 + kGameTolerance);
    }
    for (std::uint32_t level = 0; level <= s.level; ++level) {
      MdlInstance copy = inst;
      const std::uint64_t t = std::uint64_t{8} << level;
      const auto r = mdl_solve(copy, t, derive_seed(seed, level));
      if (output_worst_risk(r.avg_min_action, inst) - opt <= 0.05 + kGameTolerance) {
        EXPECT_LE(s.samples, 2 * t * 2);
      }
    }
  }
}

TEST(SamplesToTarget, BatchSamplesAreNTimesM) {
  const auto inst = make_lower_bound_family(2, 2, 0.1, LowerBoundVariant::base(), 1);
  const double opt = brute_force_opt(inst).value;
  const auto s = batch_samples_to_target(inst, 0.1, opt, 5, 1, 20);
  ASSERT_TRUE(s.reached);
  EXPECT_EQ(s.samples, inst.num_distributions() * s.budget);
}

TEST(SamplesToTarget, RequiresExactOpt) {
  const auto inst = make_convex_gdro(2, 2, ConvexFamily::logistic, 3);
  EXPECT_THROW(mdl_samples_to_target(inst, 0.1, kUnavailable, 1, 8, 4), Unsupported);
}

TEST(Sweep, SingleValueMatchesRunShape) {
  auto c = small_config("mdl");
  c.axis = "n";
  c.values = {4};
  c.search_start = 8;
  const auto recs = sweep(c);
  ASSERT_EQ(recs.size(), c.seeds.size());
  for (std::size_t k = 0; k < recs.size(); ++k) {
    EXPECT_EQ(recs[k].n, 4u);
    EXPECT_EQ(recs[k].seed, c.seeds[k]);
    EXPECT_LE(recs[k].opt_gap, c.eps + kGameTolerance);
  }
  EXPECT_THROW(sweep(small_config("mdl")), ConfigError);  // no values
}

TEST(Sweep, LowerBoundEmitsBothAlgorithms) {
  ExperimentConfig c;
  c.instance.w = 2;
  c.instance.variant = "random";
  c.values = {2, 4};
  c.seeds = {1, 2};
  c.threads = 1;
  const auto recs = lowerbound_sweep(c);
  ASSERT_EQ(recs.size(), 8u);
  for (std::size_t k = 0; k < recs.size(); ++k) {
    EXPECT_EQ(recs[k].run_id, k);
    EXPECT_EQ(recs[k].algorithm, k % 2 == 0 ? "mdl" : "batch-erm");
    EXPECT_EQ(recs[k].n, k < 4 ? 2u : 4u);
    EXPECT_EQ(recs[k].size, 4u);
  }
}

// --- R-MDL

namespace {

RmdlOptions quick_rmdl(std::size_t groups) {
  RmdlOptions o;
  o.train_sizes.assign(groups, 200);
  o.val_size = 40;
  o.rounds = 300;
  return o;
}

}  // namespace

TEST(Rmdl, SingleGroupIgnoresAdversary) {
  auto inst = make_convex_gdro(2, 1, ConvexFamily::logistic, 4, 30);
  auto o = quick_rmdl(1);
  const auto splits = draw_splits(inst, o, 3);
  o.adv_rate = 0.01;
  const auto a = rmdl_train(inst, splits, o, 3);
  o.adv_rate = 50.0;
  const auto b = rmdl_train(inst, splits, o, 3);
  EXPECT_EQ(a.theta, b.theta);
  EXPECT_EQ(a.final_weights, std::vector<double>{1.0});
}

TEST(Rmdl, SingleGroupIsMinibatchSgd) {
  // independent SGD on the lone training split, sampled the same way
  auto inst = make_convex_gdro(2, 1, ConvexFamily::logistic, 4, 30);
  const auto o = quick_rmdl(1);
  const auto splits = draw_splits(inst, o, 3);
  const auto r = rmdl_train(inst, splits, o, 3);
  const auto& loss = std::get<SmoothLoss>(inst.loss(0));
  const auto& space = inst.param_space();
  const auto& train = splits.train[0];
  Rng rng = substream(3, Stream::learner_sampling);
  std::vector<double> theta = space.center(), avg(2, 0.0), g(2);
  const std::vector<double> one{1.0};
  for (std::uint64_t t = 0; t < o.rounds; ++t) {
    std::vector<double> sum(2, 0.0);
    for (std::size_t b = 0; b < o.batch; ++b) {
      (void)sample_index(one, rng);
      loss.gradient(theta, train[uniform_index(train.size(), rng)], g);
      sum[0] += g[0];
      sum[1] += g[1];
    }
    for (int k = 0; k < 2; ++k) theta[k] -= o.lr * sum[k] / static_cast<double>(o.batch);
    theta = space.project(theta);
    avg[0] += theta[0];
    avg[1] += theta[1];
  }
  EXPECT_NEAR(r.theta[0], avg[0] / static_cast<double>(o.rounds), 1e-12);
  EXPECT_NEAR(r.theta[1], avg[1] / static_cast<double>(o.rounds), 1e-12);
}

TEST(Rmdl, AdversaryWeightsStayOnSimplex) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto inst = make_convex_gdro(3, 4, ConvexFamily::logistic, seed, 20);
    auto o = quick_rmdl(4);
    for (std::uint64_t rounds : {1, 7, 50}) {
      o.rounds = rounds;
      const auto r = rmdl_train(inst, o, seed);
      ASSERT_EQ(r.final_weights.size(), 4u);
      for (double w : r.final_weights) EXPECT_GE(w, 0.0);
      EXPECT_NEAR(std::accumulate(r.final_weights.begin(), r.final_weights.end(), 0.0), 1.0, 1e-12);
    }
  }
}

TEST(Rmdl, SampleAccountingAndPreconditions) {
  auto inst = make_two_group_logistic(1, 50);
  RmdlOptions o;
  o.train_sizes = {30, 3};
  o.val_size = 5;
  o.rounds = 20;
  const auto r = rmdl_train(inst, o, 2);
  EXPECT_EQ(r.samples_used, 30u + 3u + 2u * 5u);
  EXPECT_EQ(inst.total_draws(), r.samples_used);
  RmdlSplits bad{{{}, {}}, {{}, {}}};
  EXPECT_THROW(rmdl_train(inst, bad, o, 1), InvalidArgument);
  o.batch = 0;
  EXPECT_THROW(rmdl_train(inst, o, 1), InvalidArgument);
  auto finite = make_random_agnostic(4, 2, 3, 1);
  EXPECT_THROW(rmdl_train(finite, quick_rmdl(2), 1), Unsupported);
}

TEST(Rmdl, ExperimentEmitsPooledComparator) {
  ExperimentConfig c;
  c.algorithm = "rmdl";
  c.instance.family = "two-group-logistic";
  c.instance.support = 100;
  c.train_sizes = {200, 20};
  c.rmdl_rounds = 200;
  c.seeds = {4};
  const auto recs = run_experiment(c);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].algorithm, "rmdl");
  EXPECT_EQ(recs[1].algorithm, "pooled-erm");
  EXPECT_EQ(recs[0].samples_used, recs[1].samples_used);
  EXPECT_EQ(recs[0].samples_used, 200u + 20u + 2u * 50u);
}
