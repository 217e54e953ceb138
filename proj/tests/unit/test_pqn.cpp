#include <gtest/gtest.h>

#include "lcm/model.hpp"
#include "lcm/pqn.hpp"
#include "lcm/random.hpp"
#include "lcm/simulator.hpp"
#include "oracles.hpp"

using namespace lcm;

TEST(ProjectedGradientResidual, ZeroAtTheConstrainedMinimizer) {
  const ProductSimplex geom(std::vector<std::size_t>{3});
  Vector x(3), g(3);
  x << 1.0, 0.0, 0.0;
  g << -1.0, 0.0, 0.5;
  EXPECT_DOUBLE_EQ(projected_gradient_residual(x, g, geom), 0.0);
  g << 1.0, 0.0, 0.0;
  EXPECT_GT(projected_gradient_residual(x, g, geom), 0.0);
}

TEST(MinimizePqn, ConvexQuadraticReachesTheOracleSolution) {
  const ProductSimplex geom(std::vector<std::size_t>{3, 4});
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Matrix A = oracle::random_spd(7, 0.5, 8.0, s);
    const Vector b = Vector::LinSpaced(7, -2.0, 2.0) * (1.0 + static_cast<double>(s % 3));
    const SmoothObjective obj{[&](const Vector& x) { return 0.5 * x.dot(A * x) + b.dot(x); },
                              [&](const Vector& x) { return Vector(A * x + b); }};
    const Vector x0 = oracle::random_feasible(geom, s + 50);
    PqnConfig cfg;
    cfg.epsilon = 1e-9;
    cfg.max_iter = 50;
    const PqnRawResult r = minimize_pqn(obj, x0, geom, cfg);
    const Vector expected = x0 + oracle::enumerate_qp(A, A * x0 + b, x0, geom);
    EXPECT_LE((r.x - expected).lpNorm<Eigen::Infinity>(), 1e-5) << "instance " << s;
    EXPECT_LE(r.iterations, 50);
  }
}

TEST(MinimizePqn, MonotoneFeasibleAndMemoryBounded) {
  const auto& b = find_bundle("2C");
  const Dataset data = sample(b.params, b.n, 5);
  const BlockLayout& layout = b.params.layout();
  const ProductSimplex geom(layout);
  const SmoothObjective obj{[&](const Vector& x) { return negative_objective(data, PackedVector(layout, x)); },
                            [&](const Vector& x) { return negative_objective_gradient(data, PackedVector(layout, x)); }};
  Rng rng(3);
  PqnConfig cfg;
  cfg.max_iter = 60;
  const PqnRawResult r = minimize_pqn(obj, random_params(layout, rng).pack().values, geom, cfg);
  ASSERT_EQ(r.iterates.size(), static_cast<std::size_t>(r.iterations) + 1);
  double prev = obj.value(r.iterates.front());
  for (const Vector& x : r.iterates) {
    EXPECT_LE(feasibility_residual(layout, x), 1e-9);
    const double f = obj.value(x);
    EXPECT_LE(f, prev + 1e-10);
    prev = f;
  }
  EXPECT_LE(r.memory.size(), cfg.memory);
}

TEST(FitPqn, StationaryInitStopsImmediately) {
  const Dataset data(CategoryScheme({2}), {{1}, {1}, {2}, {1}});
  Vector eta(1);
  eta << 1.0;
  Vector row(2);
  row << 0.75, 0.25;
  const PqnResult r = fit_pqn(data, LcmParams(eta, {{row}}));
  EXPECT_TRUE(r.fit.converged);
  EXPECT_EQ(r.fit.iterations, 0);
  EXPECT_EQ(r.fit.trace.entries.size(), 1u);
}

TEST(FitPqn, BundleOneABestOfTen) {
  const auto& b = find_bundle("1A");
  const Dataset data = sample(b.params, b.n, 2026);
  double best = -1e300;
  int best_iterations = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng(derive_seed(2026, s));
    PqnConfig cfg;
    cfg.seed = s;
    const PqnResult r = fit_pqn(data, random_params(b.params.layout(), rng), cfg);
    for (const auto& e : r.fit.trace.entries) EXPECT_LE(e.feasibility, 1e-9);
    if (r.fit.log_likelihood > best) {
      best = r.fit.log_likelihood;
      best_iterations = r.fit.iterations;
    }
  }
  EXPECT_NEAR(best / static_cast<double>(b.n), -335.25 / 500.0, 0.05);
  EXPECT_LE(best_iterations, 15);
}

TEST(FitPqn, ReportsCurvatureAndSeedDeterminism) {
  const auto& b = find_bundle("1B");
  const Dataset data = sample(b.params, 300, 9);
  Rng rng(4);
  const LcmParams init = random_params(b.params.layout(), rng);
  PqnConfig cfg;
  cfg.seed = 17;
  const PqnResult a = fit_pqn(data, init, cfg);
  const PqnResult c = fit_pqn(data, init, cfg);
  ASSERT_TRUE(a.fit.curvature.has_value());
  EXPECT_EQ(a.fit.curvature->rows(), static_cast<Eigen::Index>(init.layout().size()));
  EXPECT_EQ(a.fit.params.pack().values, c.fit.params.pack().values);
  EXPECT_EQ(a.fit.iterations, c.fit.iterations);
}

TEST(PqnConfig, Validation) {
  PqnConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.nu = 1.5;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = PqnConfig{};
  cfg.memory = 0;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = PqnConfig{};
  cfg.epsilon = 0.0;
  EXPECT_THROW(cfg.validate(), InputError);
}
