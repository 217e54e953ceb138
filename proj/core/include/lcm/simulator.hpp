#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lcm/random.hpp"
#include "lcm/types.hpp"

namespace lcm {

/// A simulation scenario with its true parameters.
struct BundleSpec {
  std::string id;  // "1A" .. "4D"
  std::size_t n = 0;
  LcmParams params;
  /// Log-likelihood of the true parameters on the published sample, for
  /// order-of-magnitude comparisons only (our samples differ).
  double reported_true_loglik = 0.0;

  [[nodiscard]] const CategoryScheme& scheme() const { return params.scheme(); }
};

/// The sixteen simulation scenarios, in order 1A, 1B, ..., 4D.
const std::vector<BundleSpec>& bundle_registry();

/// Looks up a bundle by id (case-insensitive); throws InputError if unknown.
const BundleSpec& find_bundle(const std::string& id);

struct LabelledSample {
  Dataset data;
  std::vector<int> labels;  // 1-based latent class of each row
};

/// Draws n rows: the class k ~ Categorical(eta), then each y_j ~
/// Categorical(pi_{k,j}) in ascending j. Bit-reproducible for a given seed.
Dataset sample(const LcmParams& params, std::size_t n, std::uint64_t seed);
LabelledSample sample_with_labels(const LcmParams& params, std::size_t n, std::uint64_t seed);

/// Index drawn by inverse CDF from a probability row using one uniform.
int draw_categorical(std::span<const double> probs, Rng& rng);

/// Every block drawn from the symmetric Dirichlet(1), i.e. uniform on its simplex.
LcmParams random_params(const BlockLayout& layout, Rng& rng);

}  // namespace lcm
