#include <gtest/gtest.h>

#include "lcm/bench.hpp"
#include "lcm/simulator.hpp"

using namespace lcm;

namespace {

RunRecord fake(double ll, int iterations, std::uint64_t seed) {
  RunRecord r;
  r.method = Method::em;
  r.log_likelihood = ll;
  r.iterations = iterations;
  r.seed = seed;
  return r;
}

}  // namespace

TEST(BestOf, ArgmaxWithTieBreaks) {
  const std::vector<RunRecord> single{fake(-1.0, 3, 0)};
  EXPECT_EQ(&best_of(single, Method::em), &single[0]);
  const std::vector<RunRecord> two{fake(-335.25, 9, 0), fake(-336.0, 2, 1)};
  EXPECT_EQ(best_of(two, Method::em).log_likelihood, -335.25);
  const std::vector<RunRecord> tie{fake(-5.0, 9, 0), fake(-5.0, 4, 7), fake(-5.0, 4, 3)};
  EXPECT_EQ(best_of(tie, Method::em).seed, 3u);
  EXPECT_THROW(best_of(tie, Method::sqp), InputError);
}

TEST(AlignedRmse, RecoversRelabelling) {
  const LcmParams& p = find_bundle("3A").params;
  EXPECT_EQ(aligned_rmse(p, p), 0.0);
  const std::vector<int> order{2, 0, 1};
  EXPECT_EQ(aligned_rmse(p.permuted(order), p), 0.0);
  EXPECT_GT(aligned_rmse(restart_init(p.layout(), 1, 0), p), 0.0);
  EXPECT_THROW(aligned_rmse(p, find_bundle("1A").params), InputError);
}

TEST(AlignedRmse, FactorialGuard) {
  const BlockLayout layout(9, CategoryScheme({2}));
  const LcmParams a = restart_init(layout, 1, 0);
  EXPECT_THROW(aligned_rmse(a, a), InputError);
}

TEST(Median, EvenAndOdd) {
  EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_DOUBLE_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_THROW(median({}), InputError);
}

TEST(RunExperiment, ShapeAndSharedInits) {
  const auto& b = find_bundle("1A");
  const Dataset data = sample(b.params, b.n, 1);
  ExperimentConfig cfg;
  cfg.restarts = 1;
  cfg.methods = {Method::em};
  EXPECT_EQ(run_experiment(data, 2, "1A", cfg).size(), 1u);
  cfg.restarts = 10;
  cfg.methods = {Method::em, Method::sqp, Method::pqn};
  cfg.base_seed = 4;
  const auto records = run_experiment(data, 2, "1A", cfg);
  ASSERT_EQ(records.size(), 30u);
  for (int r = 0; r < 10; ++r) {
    const auto& em = records[static_cast<std::size_t>(r)];
    const auto& sqp = records[static_cast<std::size_t>(10 + r)];
    const auto& pqn = records[static_cast<std::size_t>(20 + r)];
    EXPECT_EQ(em.method, Method::em);
    EXPECT_EQ(sqp.method, Method::sqp);
    EXPECT_EQ(pqn.method, Method::pqn);
    EXPECT_EQ(em.init_id, r);
    EXPECT_EQ(em.initial.pack().values, sqp.initial.pack().values);
    EXPECT_EQ(em.initial.pack().values, pqn.initial.pack().values);
    EXPECT_EQ(em.seed, derive_seed(4, static_cast<std::uint64_t>(r)));
    for (const RunRecord* rec : {&em, &sqp, &pqn}) {
      EXPECT_EQ(rec->trace.entries.size(), static_cast<std::size_t>(rec->iterations) + 1);
      EXPECT_TRUE(std::isfinite(rec->log_likelihood));
    }
  }
}

TEST(RunExperiment, RejectsBadConfigs) {
  const auto& b = find_bundle("1A");
  const Dataset data = sample(b.params, 50, 1);
  ExperimentConfig cfg;
  cfg.methods.clear();
  EXPECT_THROW(run_experiment(data, 2, "x", cfg), InputError);
  cfg = ExperimentConfig{};
  cfg.restarts = 0;
  EXPECT_THROW(run_experiment(data, 2, "x", cfg), InputError);
}

TEST(Summarize, RmseIsSymmetricWithZeroDiagonal) {
  const auto& b = find_bundle("1B");
  const Dataset data = sample(b.params, b.n, 2);
  ExperimentConfig cfg;
  cfg.restarts = 3;
  const ComparisonReport rep = summarize(run_experiment(data, 2, "1B", cfg));
  ASSERT_EQ(rep.summaries.size(), 3u);
  ASSERT_EQ(rep.rmse.rows(), 3);
  EXPECT_EQ(rep.rmse, rep.rmse.transpose());
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_EQ(rep.rmse(i, i), 0.0);
  for (const auto& s : rep.summaries) {
    EXPECT_EQ(s.runs, 3);
    EXPECT_LE(s.converged_runs, 3);
  }
}

TEST(ConfidenceReport, NeedsCurvature) {
  const auto& b = find_bundle("1A");
  const Dataset data = sample(b.params, b.n, 3);
  const LcmParams init = restart_init(b.params.layout(), 3, 0);
  const RunRecord em = run_method(Method::em, data, init, SolverSettings{}, 1);
  EXPECT_THROW(confidence_report(em), InputError);
  const RunRecord sqp = run_method(Method::sqp, data, init, SolverSettings{}, 1);
  const auto ci = confidence_report(sqp, 0.9);
  ASSERT_EQ(ci.size(), init.layout().size());
  for (const auto& iv : ci) EXPECT_LE(iv.lower, iv.upper);
}
