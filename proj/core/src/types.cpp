#include "lcm/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lcm {

CategoryScheme::CategoryScheme(std::vector<int> categories) : categories_(std::move(categories)) {
  if (categories_.empty()) throw InputError("category scheme needs at least one variable");
  for (std::size_t j = 0; j < categories_.size(); ++j) {
    if (categories_[j] < 2) {
      throw InputError("variable " + std::to_string(j + 1) + " has fewer than 2 categories");
    }
  }
}

int CategoryScheme::total_categories() const {
  int total = 0;
  for (int c : categories_) total += c;
  return total;
}

Dataset::Dataset(CategoryScheme scheme, std::vector<std::vector<int>> rows) : scheme_(std::move(scheme)) {
  if (rows.empty()) throw InputError("dataset needs at least one observation");
  const auto d = static_cast<std::size_t>(scheme_.num_variables());
  rows_ = rows.size();
  cells_.reserve(rows_ * d);
  pattern_index_.reserve(rows_);

  std::map<std::vector<int>, std::size_t> seen;
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto& r = rows[i];
    if (r.size() != d) {
      throw InputError("observation " + std::to_string(i + 1) + " has " + std::to_string(r.size()) +
                       " values, expected " + std::to_string(d));
    }
    std::vector<int> zero_based(d);
    for (std::size_t j = 0; j < d; ++j) {
      const int c = scheme_.categories(static_cast<int>(j));
      if (r[j] < 1 || r[j] > c) {
        throw InputError("observation " + std::to_string(i + 1) + ", variable " + std::to_string(j + 1) +
                         ": label " + std::to_string(r[j]) + " outside 1.." + std::to_string(c));
      }
      cells_.push_back(r[j]);
      zero_based[j] = r[j] - 1;
    }
    auto [it, inserted] = seen.try_emplace(zero_based, patterns_.size());
    if (inserted) patterns_.push_back(Pattern{std::move(zero_based), 0.0});
    patterns_[it->second].count += 1.0;
    pattern_index_.push_back(it->second);
  }
}

std::span<const int> Dataset::row(std::size_t i) const {
  const auto d = static_cast<std::size_t>(scheme_.num_variables());
  return {cells_.data() + i * d, d};
}

BlockLayout::BlockLayout(int components, CategoryScheme scheme)
    : components_(components), scheme_(std::move(scheme)) {
  if (components_ < 1) throw InputError("component count K must be at least 1");
  if (scheme_.num_variables() < 1) throw InputError("layout needs a non-empty category scheme");
  std::size_t offset = 0;
  auto push = [&](std::size_t len) {
    blocks_.push_back(Block{offset, len});
    owner_.insert(owner_.end(), len, blocks_.size() - 1);
    offset += len;
  };
  push(static_cast<std::size_t>(components_));
  for (int k = 0; k < components_; ++k) {
    for (int j = 0; j < scheme_.num_variables(); ++j) push(static_cast<std::size_t>(scheme_.categories(j)));
  }
  size_ = offset;
}

PackedVector::PackedVector(BlockLayout l, Vector v) : layout(std::move(l)), values(std::move(v)) {
  if (static_cast<std::size_t>(values.size()) != layout.size()) {
    throw InputError("packed vector length " + std::to_string(values.size()) + " does not match layout size " +
                     std::to_string(layout.size()));
  }
}

double feasibility_residual(const BlockLayout& layout, const Vector& values) {
  double worst = 0.0;
  for (const Block& b : layout.blocks()) {
    double sum = 0.0;
    for (std::size_t i = b.offset; i < b.offset + b.length; ++i) {
      const double x = values[static_cast<Eigen::Index>(i)];
      sum += x;
      worst = std::max(worst, -x);
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

namespace {

void check_feasible(const PackedVector& p, double tol) {
  const auto& blocks = p.layout.blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    double sum = 0.0;
    for (double x : p.block(blocks[b])) {
      if (!std::isfinite(x)) throw InputError("parameter vector contains a non-finite value");
      if (x < -tol) throw InputError("negative probability in block " + std::to_string(b));
      sum += x;
    }
    if (std::abs(sum - 1.0) > tol) {
      throw InputError("block " + std::to_string(b) + " sums to " + std::to_string(sum) + ", not 1");
    }
  }
}

}  // namespace

LcmParams::LcmParams(Vector eta, const std::vector<std::vector<Vector>>& pi) {
  const auto K = static_cast<std::size_t>(eta.size());
  if (K == 0) throw InputError("need at least one component");
  if (pi.size() != K) throw InputError("pi must have one entry per component");
  if (pi.front().empty()) throw InputError("pi rows must cover at least one variable");
  std::vector<int> categories;
  for (const auto& row : pi.front()) categories.push_back(static_cast<int>(row.size()));
  for (const auto& comp : pi) {
    if (comp.size() != categories.size()) throw InputError("every component needs the same number of variables");
    for (std::size_t j = 0; j < comp.size(); ++j) {
      if (static_cast<int>(comp[j].size()) != categories[j]) {
        throw InputError("category count of variable " + std::to_string(j + 1) + " differs between components");
      }
    }
  }
  PackedVector packed(BlockLayout(static_cast<int>(K), CategoryScheme(categories)));
  packed.values.head(static_cast<Eigen::Index>(K)) = eta;
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < categories.size(); ++j) {
      const Block b = packed.layout.pi_block(static_cast<int>(k), static_cast<int>(j));
      packed.values.segment(static_cast<Eigen::Index>(b.offset), static_cast<Eigen::Index>(b.length)) = pi[k][j];
    }
  }
  check_feasible(packed, kFeasibilityTol);
  packed_ = std::move(packed);
}

LcmParams LcmParams::from_packed(const PackedVector& packed, double tol) {
  if (static_cast<std::size_t>(packed.values.size()) != packed.layout.size()) {
    throw InputError("packed vector length does not match its layout");
  }
  check_feasible(packed, tol);
  return LcmParams(packed);
}

Vector LcmParams::pi_row(int k, int j) const {
  const Block b = layout().pi_block(k, j);
  return packed_.values.segment(static_cast<Eigen::Index>(b.offset), static_cast<Eigen::Index>(b.length));
}

LcmParams LcmParams::permuted(std::span<const int> order) const {
  const int K = components();
  if (static_cast<int>(order.size()) != K) throw InputError("permutation length must equal K");
  PackedVector out(layout());
  const int d = scheme().num_variables();
  for (int k = 0; k < K; ++k) {
    const int src = order[static_cast<std::size_t>(k)];
    if (src < 0 || src >= K) throw InputError("permutation entry out of range");
    out.values[k] = eta(src);
    for (int j = 0; j < d; ++j) {
      const Block to = layout().pi_block(k, j);
      const Block from = layout().pi_block(src, j);
      out.values.segment(static_cast<Eigen::Index>(to.offset), static_cast<Eigen::Index>(to.length)) =
          packed_.values.segment(static_cast<Eigen::Index>(from.offset), static_cast<Eigen::Index>(from.length));
    }
  }
  return LcmParams(std::move(out));
}

}  // namespace lcm
