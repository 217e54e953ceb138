#include <gtest/gtest.h>

#include <cmath>

#include "lcm/model.hpp"
#include "lcm/simulator.hpp"
#include "oracles.hpp"

using namespace lcm;

namespace {

LcmParams single(double p) {
  Vector eta(1);
  eta << 1.0;
  Vector row(2);
  row << p, 1.0 - p;
  return LcmParams(eta, {{row}});
}

double max_relative_error(const Vector& a, const Vector& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  }
  return worst;
}

}  // namespace

TEST(ComponentDensity, SingleFactor) {
  const std::vector<int> y{1};
  EXPECT_DOUBLE_EQ(component_density(y, 0, single(0.4)), 0.4);
}

TEST(ComponentDensity, BundleOneC) {
  const LcmParams& p = find_bundle("1C").params;
  const std::vector<int> y{1, 2};
  EXPECT_NEAR(component_density(y, 0, p), 0.36, 1e-15);
}

TEST(ComponentDensity, UniformRowsGiveTheProduct) {
  Vector eta(1);
  eta << 1.0;
  Vector half(2);
  half << 0.5, 0.5;
  const LcmParams p(eta, {{half, half, half}});
  const std::vector<int> y{2, 1, 2};
  EXPECT_DOUBLE_EQ(component_density(y, 0, p), 0.125);
}

TEST(ComponentDensity, RejectsOutOfRangeLabels) {
  const std::vector<int> y{3};
  EXPECT_THROW(component_density(y, 0, single(0.4)), InputError);
  const std::vector<int> z{1};
  EXPECT_THROW(component_density(z, 1, single(0.4)), InputError);
}

TEST(LogLikelihood, HandComputedValue) {
  const Dataset data(CategoryScheme({2}), {{1}, {2}});
  EXPECT_NEAR(log_likelihood(data, single(0.4)), std::log(0.4) + std::log(0.6), 1e-14);
  EXPECT_NEAR(log_likelihood(data, single(0.4)), -1.42712, 1e-5);
  EXPECT_NEAR(negative_objective(data, single(0.4).pack()), 1.42712, 1e-5);
}

TEST(LogLikelihood, IdenticalComponentsCollapse) {
  const Dataset data(CategoryScheme({3, 2}), {{1, 1}, {3, 2}, {2, 2}, {3, 1}});
  Vector one(1);
  one << 1.0;
  Vector a(3), b(2);
  a << 0.2, 0.5, 0.3;
  b << 0.6, 0.4;
  const LcmParams k1(one, {{a, b}});
  for (double w : {0.5, 0.1, 0.9}) {
    Vector eta(2);
    eta << w, 1.0 - w;
    const LcmParams k2(eta, {{a, b}, {a, b}});
    EXPECT_NEAR(log_likelihood(data, k2), log_likelihood(data, k1), 1e-10);
  }
}

TEST(LogLikelihood, ExactlyInvariantUnderRelabelling) {
  const auto& b = find_bundle("2D");
  const Dataset data = sample(b.params, 300, 5);
  const std::vector<int> order{2, 0, 1};
  EXPECT_EQ(log_likelihood(data, b.params), log_likelihood(data, b.params.permuted(order)));
}

TEST(LogLikelihood, FloorsZeroDensity) {
  const Dataset data(CategoryScheme({2}), {{1}, {2}});
  const double value = log_likelihood(data, single(1.0));
  EXPECT_TRUE(std::isfinite(value));
  EXPECT_NEAR(value, std::log(kLogFloor), 1e-9);
}

TEST(LogLikelihood, SchemeMismatchIsAnInputError) {
  const Dataset data(CategoryScheme({3}), {{1}});
  EXPECT_THROW(log_likelihood(data, single(0.4)), InputError);
}

TEST(LogLikelihood, BundleOneATrueParametersPerObservation) {
  const auto& b = find_bundle("1A");
  const Dataset data = sample(b.params, b.n, 11);
  EXPECT_NEAR(log_likelihood(data, b.params) / static_cast<double>(b.n), -335.29 / 500.0, 0.05);
}

TEST(Gradient, BinomialClosedForm) {
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < 7; ++i) rows.push_back({1});
  for (int i = 0; i < 3; ++i) rows.push_back({2});
  const Dataset data(CategoryScheme({2}), rows);
  const PackedVector g = gradient(data, single(0.35));
  EXPECT_NEAR(g.values[1], 7 / 0.35, 1e-10);
  EXPECT_NEAR(g.values[2], 3 / 0.65, 1e-10);
  EXPECT_NEAR(g.values[0], 10.0, 1e-10);
}

TEST(Gradient, SymmetricComponentsHaveEqualWeightPartials) {
  const Dataset data(CategoryScheme({2, 2}), {{1, 1}, {2, 1}, {2, 2}});
  Vector eta(2);
  eta << 0.5, 0.5;
  Vector r(2);
  r << 0.3, 0.7;
  const PackedVector g = gradient(data, LcmParams(eta, {{r, r}, {r, r}}));
  EXPECT_DOUBLE_EQ(g.values[0], g.values[1]);
}

TEST(Gradient, MatchesCentralDifferencesOnBundleOneA) {
  const auto& b = find_bundle("1A");
  const Dataset data = sample(b.params, b.n, 3);
  const Vector analytic = gradient(data, b.params).values;
  const Vector numeric = finite_difference_gradient(data, b.params.pack(), 1e-6).values;
  EXPECT_LE(max_relative_error(numeric, analytic), 1e-5);
}

TEST(Gradient, CoarseStepStillAgreesRoughly) {
  const auto& b = find_bundle("1A");
  const Dataset data = sample(b.params, b.n, 3);
  const Vector analytic = gradient(data, b.params).values;
  const Vector numeric = finite_difference_gradient(data, b.params.pack(), 0.05).values;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < analytic.size(); ++i) {
    worst = std::max(worst, std::abs(numeric[i] - analytic[i]) / std::abs(analytic[i]));
  }
  EXPECT_LE(worst, 1e-2);
}

TEST(Gradient, RandomInteriorPointsOnEveryScheme) {
  for (const auto& b : bundle_registry()) {
    const Dataset data = sample(b.params, 200, 17);
    const ProductSimplex geom(b.params.layout());
    for (int t = 0; t < 3; ++t) {
      const PackedVector x(b.params.layout(), oracle::random_feasible(geom, 100 + t));
      const Vector analytic = log_likelihood_gradient(data, x);
      const Vector numeric = finite_difference_gradient(data, x, 1e-6).values;
      EXPECT_LE(max_relative_error(numeric, analytic), 1e-4) << b.id;
    }
  }
}

TEST(Gradient, NegativeObjectiveIsTheNegation) {
  const auto& b = find_bundle("2B");
  const Dataset data = sample(b.params, 100, 2);
  Vector g;
  const double f = negative_objective_with_gradient(data, b.params.pack(), g);
  EXPECT_DOUBLE_EQ(f, -log_likelihood(data, b.params));
  EXPECT_TRUE(g.isApprox(-gradient(data, b.params).values, 1e-14));
  EXPECT_TRUE(negative_objective_gradient(data, b.params.pack()).isApprox(g, 1e-14));
}

TEST(CentralDifference, ExactOnQuadratics) {
  Vector x(1);
  x << 1.0;
  const Vector d = central_difference([](const Vector& v) { return v[0] * v[0]; }, x, 0.1);
  EXPECT_NEAR(d[0], 2.0, 1e-14);
}

TEST(Responsibilities, SymmetricComponentsSplitEvenly) {
  const Dataset data(CategoryScheme({2}), {{1}, {2}, {2}});
  Vector eta(2);
  eta << 0.5, 0.5;
  Vector r(2);
  r << 0.3, 0.7;
  const Responsibilities resp = responsibilities(data, LcmParams(eta, {{r}, {r}}));
  EXPECT_TRUE(resp.D.isApproxToConstant(0.5));
}

TEST(Responsibilities, DegenerateWeights) {
  const Dataset data(CategoryScheme({2}), {{1}, {2}});
  Vector eta(2);
  eta << 1.0, 0.0;
  Vector r(2);
  r << 0.3, 0.7;
  const Responsibilities resp = responsibilities(data, LcmParams(eta, {{r}, {r}}));
  EXPECT_DOUBLE_EQ(resp.D(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(resp.D(1, 1), 0.0);
}

TEST(Responsibilities, BundleOneAHandValue) {
  const Dataset data(CategoryScheme({2}), {{1}});
  const Responsibilities resp = responsibilities(data, find_bundle("1A").params);
  EXPECT_NEAR(resp.D(0, 0), 1.0 / 3.0, 1e-15);
}

TEST(Responsibilities, RowsSumToOneEvenWhenDensitiesUnderflow) {
  const auto& b = find_bundle("4D");
  const Dataset data = sample(b.params, 500, 9);
  const Responsibilities resp = responsibilities(data, b.params);
  for (Eigen::Index i = 0; i < resp.D.rows(); ++i) EXPECT_NEAR(resp.D.row(i).sum(), 1.0, 1e-9);
  EXPECT_GE(resp.D.minCoeff(), 0.0);
  EXPECT_LE(resp.D.maxCoeff(), 1.0);
}
