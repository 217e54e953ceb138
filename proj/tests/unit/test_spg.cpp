#include <gtest/gtest.h>

#include "lcm/spg.hpp"
#include "oracles.hpp"

using namespace lcm;

namespace {

SmoothObjective quadratic(const Matrix& A, const Vector& b) {
  return {[A, b](const Vector& x) { return 0.5 * x.dot(A * x) + b.dot(x); },
          [A, b](const Vector& x) { return Vector(A * x + b); }};
}

}  // namespace

TEST(Spg, StationaryStartReturnsAfterOneIteration) {
  const ProductSimplex geom(std::vector<std::size_t>{3});
  Vector z(3);
  z << 0.2, 0.3, 0.5;
  const SmoothObjective obj{[z](const Vector& x) { return 0.5 * (x - z).squaredNorm(); },
                            [z](const Vector& x) { return Vector(x - z); }};
  Rng rng(1);
  const SpgResult r = spg_solve(obj, z, geom, SpgConfig{}, rng);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.x, z);
}

TEST(Spg, DistanceObjectiveRecoversTheProjection) {
  const ProductSimplex geom(std::vector<std::size_t>{3, 2});
  Vector z(5);
  z << 1.4, -0.3, 0.2, 2.0, 2.5;
  const SmoothObjective obj{[z](const Vector& x) { return 0.5 * (x - z).squaredNorm(); },
                            [z](const Vector& x) { return Vector(x - z); }};
  Vector x0(5);
  x0 << 1.0 / 3, 1.0 / 3, 1.0 / 3, 0.5, 0.5;
  Rng rng(2);
  const SpgResult r = spg_solve(obj, x0, geom, SpgConfig{}, rng);
  EXPECT_LE((r.x - project_product(z, geom)).lpNorm<Eigen::Infinity>(), 1e-6);
}

TEST(Spg, MatchesTheQpOracleOnRandomQuadratics) {
  const ProductSimplex geom(std::vector<std::size_t>{3});
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Matrix A = oracle::random_spd(3, 0.5, 5.0, s);
    const Vector b = oracle::random_feasible(geom, s + 100) * 4.0 - Vector::Constant(3, 1.0);
    const Vector x0 = oracle::random_feasible(geom, s + 200);
    SpgConfig cfg;
    cfg.inner_max_iter = 1000;
    cfg.inner_tol = 1e-12;
    Rng rng(s);
    const SpgResult r = spg_solve(quadratic(A, b), x0, geom, cfg, rng);
    const Vector expected = x0 + oracle::enumerate_qp(A, A * x0 + b, x0, geom);
    EXPECT_LE((r.x - expected).lpNorm<Eigen::Infinity>(), 1e-5) << "instance " << s;
  }
}

TEST(Spg, IteratesStayFeasible) {
  const ProductSimplex geom(std::vector<std::size_t>{4, 2, 3});
  const Matrix A = oracle::random_spd(9, 0.1, 20.0, 9);
  const Vector b = Vector::LinSpaced(9, -3.0, 3.0);
  const Vector x0 = oracle::random_feasible(geom, 9);
  std::vector<Vector> seen;
  SmoothObjective obj = quadratic(A, b);
  const auto value = obj.value;
  obj.value = [&](const Vector& x) {
    seen.push_back(x);
    return value(x);
  };
  Rng rng(4);
  const SpgResult r = spg_solve(obj, x0, geom, SpgConfig{}, rng);
  seen.push_back(r.x);
  for (const Vector& x : seen) {
    EXPECT_GE(x.minCoeff(), -1e-12);
    for (const Block& blk : geom.blocks()) {
      EXPECT_NEAR(x.segment(static_cast<Eigen::Index>(blk.offset), static_cast<Eigen::Index>(blk.length)).sum(), 1.0,
                  1e-9);
    }
  }
}

TEST(Spg, PrintedSpectralStepStillConverges) {
  const ProductSimplex geom(std::vector<std::size_t>{4});
  const Matrix A = oracle::random_spd(4, 1.0, 3.0, 5);
  const Vector b = Vector::LinSpaced(4, -1.0, 1.0);
  const Vector x0 = Vector::Constant(4, 0.25);
  SpgConfig cfg;
  cfg.step = SpectralStep::printed;
  cfg.inner_max_iter = 2000;
  cfg.inner_tol = 1e-12;
  Rng rng(6);
  const SpgResult r = spg_solve(quadratic(A, b), x0, geom, cfg, rng);
  const Vector expected = x0 + oracle::enumerate_qp(A, A * x0 + b, x0, geom);
  EXPECT_LE((r.x - expected).lpNorm<Eigen::Infinity>(), 1e-5);
}

TEST(SpgConfig, Validation) {
  SpgConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.alpha_min = 2e10;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = SpgConfig{};
  cfg.history = 0;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = SpgConfig{};
  cfg.initial_step = -1.0;
  EXPECT_THROW(cfg.validate(), InputError);
}
