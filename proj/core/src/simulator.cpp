#include "lcm/simulator.hpp"

#include <algorithm>
#include <cctype>

namespace lcm {

namespace {

using Row = std::vector<double>;
using Component = std::vector<Row>;

BundleSpec make_bundle(std::string id, std::size_t n, std::vector<double> eta, std::vector<Component> pi,
                       double reported) {
  std::vector<std::vector<Vector>> rows;
  for (const auto& comp : pi) {
    std::vector<Vector> vars;
    for (const auto& r : comp) vars.push_back(Eigen::Map<const Vector>(r.data(), static_cast<Eigen::Index>(r.size())));
    rows.push_back(std::move(vars));
  }
  const Vector w = Eigen::Map<const Vector>(eta.data(), static_cast<Eigen::Index>(eta.size()));
  return BundleSpec{std::move(id), n, LcmParams(w, rows), reported};
}

std::vector<BundleSpec> build_registry() {
  // Shared rows of bundles 2-4.
  const Component b2k1 = {{0.1, 0.9}, {0.8, 0.1, 0.1}, {0.6, 0.4}};
  const Component b2k2 = {{0.8, 0.2}, {0.3, 0.4, 0.3}, {0.9, 0.1}};
  const Component b2k3 = {{0.6, 0.4}, {0.6, 0.3, 0.1}, {0.2, 0.8}};

  const Component c1 = {{0.9, 0.1}, {0.3, 0.7}, {0.1, 0.9}, {0.6, 0.4}};
  const Component c2 = {{0.2, 0.8}, {0.5, 0.5}, {0.55, 0.45}, {0.5, 0.5}};
  const Component c3 = {{0.1, 0.9}, {0.4, 0.6}, {0.3, 0.7}, {0.7, 0.3}};
  const Component c4 = {{0.5, 0.5}, {0.9, 0.1}, {0.2, 0.8}, {0.5, 0.5}};
  const Component c5 = {{0.8, 0.2}, {0.1, 0.9}, {0.9, 0.1}, {0.7, 0.3}};

  auto first = [](const Component& c, std::size_t d) { return Component(c.begin(), c.begin() + static_cast<long>(d)); };
  auto extend = [](Component c, Row extra) {
    c.push_back(std::move(extra));
    return c;
  };

  std::vector<BundleSpec> out;
  out.push_back(make_bundle("1A", 500, {0.5, 0.5}, {{{0.4, 0.6}}, {{0.8, 0.2}}}, -335.29));
  out.push_back(make_bundle("1B", 500, {0.5, 0.3, 0.2}, {{{0.4, 0.6}}, {{0.8, 0.2}}, {{0.1, 0.9}}}, -344.49));
  out.push_back(make_bundle("1C", 500, {0.5, 0.5}, {{{0.4, 0.6}, {0.1, 0.9}}, {{0.8, 0.2}, {0.6, 0.4}}}, -661.30));
  out.push_back(make_bundle("1D", 500, {0.5, 0.5},
                            {{{0.4, 0.6}, {0.1, 0.9}, {0.5, 0.5}, {0.6, 0.4}},
                             {{0.8, 0.2}, {0.6, 0.4}, {0.4, 0.6}, {0.7, 0.3}}},
                            -1323.29));

  out.push_back(make_bundle("2A", 1000, {0.4, 0.6}, {first(b2k1, 2), first(b2k2, 2)}, -1656.59));
  out.push_back(make_bundle("2B", 1000, {0.4, 0.4, 0.2},
                            {first(b2k1, 2), first(b2k2, 2), {{0.6, 0.4}, {0.5, 0.3, 0.2}}}, -1679.85));
  out.push_back(make_bundle("2C", 1000, {0.4, 0.6}, {b2k1, b2k2}, -2156.11));
  out.push_back(make_bundle("2D", 1000, {0.4, 0.4, 0.2}, {b2k1, b2k2, b2k3}, -2274.72));

  out.push_back(make_bundle("3A", 2000, {0.3, 0.4, 0.3}, {first(c1, 3), first(c2, 3), first(c3, 3)}, -3888.77));
  out.push_back(make_bundle("3B", 2000, {0.3, 0.2, 0.3, 0.2},
                            {first(c1, 3), first(c2, 3), first(c3, 3), first(c4, 3)}, -3906.01));
  out.push_back(make_bundle("3C", 2000, {0.3, 0.2, 0.3, 0.2}, {c1, c2, c3, c4}, -5241.99));
  out.push_back(make_bundle("3D", 2000, {0.3, 0.4, 0.3},
                            {extend(c1, {0.7, 0.3}), extend(c2, {0.3, 0.7}), extend(c3, {0.2, 0.8})}, -6437.05));

  out.push_back(make_bundle("4A", 5000, {0.3, 0.2, 0.3, 0.2}, {c1, c2, c3, c4}, -13105.82));
  out.push_back(make_bundle("4B", 5000, {0.3, 0.2, 0.3, 0.1, 0.1}, {c1, c2, c3, c4, c5}, -13335.47));
  out.push_back(make_bundle("4C", 5000, {0.3, 0.2, 0.3, 0.2},
                            {extend(c1, {0.2, 0.8}), extend(c2, {0.8, 0.2}), extend(c3, {0.3, 0.7}),
                             extend(c4, {0.9, 0.1})},
                            -16336.15));
  out.push_back(make_bundle("4D", 5000, {0.3, 0.2, 0.3, 0.1, 0.1},
                            {extend(c1, {0.4, 0.6}), extend(c2, {0.7, 0.3}), extend(c3, {0.4, 0.6}),
                             extend(c4, {0.8, 0.2}), extend(c5, {0.9, 0.1})},
                            -16684.59));
  return out;
}

}  // namespace

const std::vector<BundleSpec>& bundle_registry() {
  static const std::vector<BundleSpec> registry = build_registry();
  return registry;
}

const BundleSpec& find_bundle(const std::string& id) {
  std::string key = id;
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::toupper(c); });
  for (const auto& b : bundle_registry()) {
    if (b.id == key) return b;
  }
  throw InputError("unknown bundle '" + id + "' (expected 1A..4D)");
}

int draw_categorical(std::span<const double> probs, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last_positive = static_cast<int>(i);
    cumulative += probs[i];
    if (u < cumulative) return static_cast<int>(i);
  }
  // Rounding left the cumulative sum just below 1.
  return last_positive;
}

LabelledSample sample_with_labels(const LcmParams& params, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InputError("sample size must be at least 1");
  Rng rng(seed);
  const PackedVector& packed = params.pack();
  const BlockLayout& layout = params.layout();
  const int d = layout.scheme().num_variables();
  std::vector<std::vector<int>> rows(n, std::vector<int>(static_cast<std::size_t>(d)));
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int k = draw_categorical(packed.block(layout.eta_block()), rng);
    labels[i] = k + 1;
    for (int j = 0; j < d; ++j) {
      rows[i][static_cast<std::size_t>(j)] = draw_categorical(packed.block(layout.pi_block(k, j)), rng) + 1;
    }
  }
  return LabelledSample{Dataset(layout.scheme(), std::move(rows)), std::move(labels)};
}

Dataset sample(const LcmParams& params, std::size_t n, std::uint64_t seed) {
  return sample_with_labels(params, n, seed).data;
}

LcmParams random_params(const BlockLayout& layout, Rng& rng) {
  PackedVector packed(layout);
  for (const Block& b : layout.blocks()) {
    auto block = packed.block(b);
    double total = 0.0;
    for (double& x : block) {
      x = rng.exponential();
      total += x;
    }
    for (double& x : block) x /= total;
  }
  return LcmParams::from_packed(packed);
}

}  // namespace lcm
