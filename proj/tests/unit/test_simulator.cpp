#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "lcm/model.hpp"
#include "lcm/simulator.hpp"

using namespace lcm;

TEST(Registry, SixteenBundlesWithExactRows) {
  const auto& all = bundle_registry();
  ASSERT_EQ(all.size(), 16u);
  const std::size_t sizes[] = {500, 1000, 2000, 5000};
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(all[i].id, std::string(1, static_cast<char>('1' + i / 4)) + static_cast<char>('A' + i % 4));
    EXPECT_EQ(all[i].n, sizes[i / 4]);
    EXPECT_EQ(feasibility_residual(all[i].params.layout(), all[i].params.pack().values) <= 1e-15, true) << all[i].id;
  }
}

TEST(Registry, SpotValues) {
  EXPECT_TRUE(find_bundle("1A").params.eta().isApprox(Vector::Constant(2, 0.5)));
  Vector row(3);
  row << 0.5, 0.3, 0.2;
  EXPECT_TRUE(find_bundle("2B").params.pi_row(2, 1).isApprox(row));
  Vector eta(5);
  eta << 0.3, 0.2, 0.3, 0.1, 0.1;
  EXPECT_TRUE(find_bundle("4d").params.eta().isApprox(eta));
  EXPECT_THROW(find_bundle("5A"), InputError);
}

TEST(Sample, DegenerateMixtureUsesOneComponent) {
  Vector eta(2);
  eta << 1.0, 0.0;
  Vector a(3), b(3);
  a << 0.2, 0.5, 0.3;
  b << 1.0, 0.0, 0.0;
  const std::size_t n = 20000;
  const LabelledSample s = sample_with_labels(LcmParams(eta, {{a}, {b}}), n, 3);
  std::vector<double> freq(3, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_EQ(s.labels[i], 1);
    freq[static_cast<std::size_t>(s.data.at(i, 0) - 1)] += 1.0 / static_cast<double>(n);
  }
  for (int l = 0; l < 3; ++l) EXPECT_NEAR(freq[static_cast<std::size_t>(l)], a[l], 3.0 / std::sqrt(n));
}

TEST(Sample, BundleOneAMarginal) {
  const auto& b = find_bundle("1A");
  const Dataset d = sample(b.params, 500, 7);
  double ones = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) ones += d.at(i, 0) == 1 ? 1.0 : 0.0;
  EXPECT_NEAR(ones / 500.0, 0.6, 0.066);
}

TEST(Sample, SingleRowAndDeterminism) {
  const auto& b = find_bundle("3B");
  const Dataset one = sample(b.params, 1, 1);
  EXPECT_EQ(one.size(), 1u);
  EXPECT_EQ(one.num_variables(), b.scheme().num_variables());
  const Dataset x = sample(b.params, 300, 99);
  const Dataset y = sample(b.params, 300, 99);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (int j = 0; j < x.num_variables(); ++j) ASSERT_EQ(x.at(i, j), y.at(i, j));
  }
}

TEST(Sample, CellFrequenciesFollowTheMixtureDensity) {
  const auto& b = find_bundle("2B");
  const std::size_t n = 100000;
  const Dataset d = sample(b.params, n, 123);
  for (const Pattern& p : d.patterns()) {
    std::vector<int> y(p.labels.size());
    for (std::size_t j = 0; j < y.size(); ++j) y[j] = p.labels[j] + 1;
    double density = 0.0;
    for (int k = 0; k < b.params.components(); ++k) density += b.params.eta(k) * component_density(y, k, b.params);
    EXPECT_NEAR(p.count / static_cast<double>(n), density, 4.0 / std::sqrt(static_cast<double>(n)));
  }
}

TEST(DrawCategorical, InverseCdf) {
  const std::vector<double> probs{0.0, 1.0, 0.0};
  Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(draw_categorical(probs, rng), 1);
}

TEST(RandomParams, FeasibleAndSeeded) {
  const BlockLayout layout(3, CategoryScheme({2, 4}));
  Rng a(5), b(5);
  const LcmParams p = random_params(layout, a);
  EXPECT_EQ(p.pack().values, random_params(layout, b).pack().values);
  EXPECT_LE(feasibility_residual(layout, p.pack().values), 1e-12);
  EXPECT_GT(p.pack().values.minCoeff(), 0.0);
}
