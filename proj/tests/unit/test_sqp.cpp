#include <gtest/gtest.h>

#include "lcm/model.hpp"
#include "lcm/random.hpp"
#include "lcm/simulator.hpp"
#include "lcm/sqp.hpp"
#include "oracles.hpp"

using namespace lcm;

TEST(MeritValue, PenalisesViolations) {
  const ProductSimplex geom(std::vector<std::size_t>{2});
  Penalty rho{Vector::Constant(1, 10.0), Vector::Constant(2, 2.0)};
  Vector x(2);
  x << 0.5, 0.5;
  EXPECT_DOUBLE_EQ(merit_value(3.0, x, rho, geom), 3.0);
  x << 0.6, 0.5;
  EXPECT_NEAR(merit_value(3.0, x, rho, geom), 4.0, 1e-12);
  x << 1.05, -0.05;
  EXPECT_NEAR(merit_value(3.0, x, rho, geom), 3.1, 1e-12);
}

TEST(UpdatePenalty, PowellRule) {
  Vector prev(3), mu(3);
  prev << 0.0, 10.0, 6.0;
  mu << 4.0, -4.0, 0.0;
  const Vector rho = update_penalty(prev, mu);
  EXPECT_DOUBLE_EQ(rho[0], 4.0);
  EXPECT_DOUBLE_EQ(rho[1], 7.0);
  EXPECT_DOUBLE_EQ(rho[2], 3.0);
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_GE(rho[i], std::abs(mu[i]));
}

TEST(DampedBfgs, SecantAlreadyHeldIsANoOp) {
  const Matrix B = oracle::random_spd(4, 1.0, 3.0, 1);
  const Vector s = Vector::LinSpaced(4, -1.0, 1.0);
  const DampedUpdate u = damped_bfgs_update(B, s, B * s);
  EXPECT_DOUBLE_EQ(u.gamma, 1.0);
  EXPECT_LE((u.B - B).norm(), 1e-12);
}

TEST(DampedBfgs, NegativeCurvatureIsDamped) {
  const Matrix B = Matrix::Identity(3, 3);
  Vector s(3), eta(3);
  s << 1.0, 0.0, 0.0;
  eta << -1.0, 0.5, 0.0;
  const DampedUpdate u = damped_bfgs_update(B, s, eta);
  EXPECT_LT(u.gamma, 1.0);
  EXPECT_NEAR(u.qs, 0.2 * u.sBs, 1e-14);
  EXPECT_TRUE(u.applied);
  EXPECT_EQ(Eigen::LLT<Matrix>(u.B).info(), Eigen::Success);
}

TEST(DampedBfgs, TinyStepIsSkipped) {
  const DampedUpdate u = damped_bfgs_update(Matrix::Identity(2, 2), Vector::Constant(2, 1e-9), Vector::Ones(2));
  EXPECT_FALSE(u.applied);
}

TEST(DampedBfgs, QuadraticRecoversTheHessian) {
  const Eigen::Index n = 5;
  const Matrix A = oracle::random_spd(n, 1.0, 4.0, 9);
  // Eigenvectors of A are A-conjugate, so every earlier secant pair survives.
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(A);
  Matrix B = Matrix::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector s = eig.eigenvectors().col(i);
    const DampedUpdate u = damped_bfgs_update(B, s, A * s);
    ASSERT_TRUE(u.applied);
    EXPECT_LE((u.B * s - A * s).norm(), 1e-10);
    B = u.B;
  }
  EXPECT_LE((B - A).norm(), 1e-8);
}

TEST(KktResidual, ZeroAtAConstrainedMinimum) {
  const ProductSimplex geom(std::vector<std::size_t>{3});
  Vector x(3), g(3);
  x << 0.5, 0.5, 0.0;
  g << 1.0, 1.0, 3.0;
  EXPECT_DOUBLE_EQ(kkt_residual(x, g, first_order_multipliers(x, g, geom), geom), 0.0);
  g << 1.0, 2.0, 3.0;
  EXPECT_GT(kkt_residual(x, g, first_order_multipliers(x, g, geom), geom), 0.1);
}

TEST(MinimizeSqp, ConvexQuadraticMatchesTheOracle) {
  const ProductSimplex geom(std::vector<std::size_t>{2, 4});
  for (std::uint64_t t = 0; t < 10; ++t) {
    const Matrix A = oracle::random_spd(6, 0.5, 6.0, t);
    const Vector b = Vector::LinSpaced(6, 2.0, -2.0);
    const SmoothObjective obj{[&](const Vector& x) { return 0.5 * x.dot(A * x) + b.dot(x); },
                              [&](const Vector& x) { return Vector(A * x + b); }};
    const Vector x0 = oracle::random_feasible(geom, t);
    SqpConfig cfg;
    cfg.kkt_tol = 1e-10;
    const SqpRawResult r = minimize_sqp(obj, x0, geom, cfg);
    EXPECT_TRUE(r.converged) << r.status;
    const Vector expected = x0 + oracle::enumerate_qp(A, A * x0 + b, x0, geom);
    EXPECT_LE((r.x - expected).lpNorm<Eigen::Infinity>(), 1e-6);
  }
}

TEST(FitSqp, OptimumInitStopsAtIterationZero) {
  const Dataset data(CategoryScheme({2}), {{1}, {1}, {2}, {1}});
  Vector eta(1);
  eta << 1.0;
  Vector row(2);
  row << 0.75, 0.25;
  const SqpResult r = fit_sqp(data, LcmParams(eta, {{row}}));
  EXPECT_TRUE(r.fit.converged);
  EXPECT_EQ(r.fit.iterations, 0);
}

TEST(FitSqp, InvariantsHoldOnAMixture) {
  const auto& b = find_bundle("2C");
  const Dataset data = sample(b.params, b.n, 6);
  Rng rng(7);
  const SqpResult r = fit_sqp(data, random_params(b.params.layout(), rng));
  EXPECT_EQ(r.diagnostics.cholesky_failures, 0);
  EXPECT_GE(r.diagnostics.min_damping_ratio, 1.0 - 1e-9);
  EXPECT_LE(r.diagnostics.max_qp_residual, 1e-10);
  EXPECT_GE(r.diagnostics.min_bound_slack, -1e-12);
  EXPECT_LE((r.B - r.B.transpose()).norm(), 1e-12 * r.B.norm());
  EXPECT_EQ(Eigen::LLT<Matrix>(r.B).info(), Eigen::Success);
  for (const auto& e : r.fit.trace.entries) EXPECT_LE(e.feasibility, 1e-9);
  EXPECT_TRUE(r.fit.converged) << r.fit.status;
}

TEST(FitSqp, BundleOneABestOfTen) {
  const auto& b = find_bundle("1A");
  const Dataset data = sample(b.params, b.n, 2026);
  double best = -1e300;
  int best_iterations = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng(derive_seed(2026, s));
    const SqpResult r = fit_sqp(data, random_params(b.params.layout(), rng));
    if (r.fit.log_likelihood > best) {
      best = r.fit.log_likelihood;
      best_iterations = r.fit.iterations;
    }
  }
  EXPECT_NEAR(best / static_cast<double>(b.n), -335.25 / 500.0, 0.05);
  EXPECT_LE(best_iterations, 15);
}
