#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lcm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised for malformed inputs: bad category labels, scheme mismatches,
/// infeasible parameters, non-finite vectors.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical precondition fails, e.g. an indefinite matrix
/// that must be factored.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tolerance used when validating simplex membership of user-facing parameters.
inline constexpr double kFeasibilityTol = 1e-9;

/// Number of observed variables and their category counts c_j.
class CategoryScheme {
 public:
  CategoryScheme() = default;
  explicit CategoryScheme(std::vector<int> categories);

  [[nodiscard]] int num_variables() const { return static_cast<int>(categories_.size()); }
  [[nodiscard]] int categories(int j) const { return categories_[static_cast<std::size_t>(j)]; }
  [[nodiscard]] const std::vector<int>& all_categories() const { return categories_; }
  [[nodiscard]] int total_categories() const;

  bool operator==(const CategoryScheme&) const = default;

 private:
  std::vector<int> categories_;
};

/// One distinct observation row together with its multiplicity.
struct Pattern {
  std::vector<int> labels;  // 0-based category indices
  double count = 0.0;
};

/// N x d matrix of categorical observations, labels 1..c_j.
///
/// Identical rows are collapsed into weighted patterns at construction so
/// likelihood evaluation scales with the number of distinct rows.
class Dataset {
 public:
  Dataset(CategoryScheme scheme, std::vector<std::vector<int>> rows);

  [[nodiscard]] const CategoryScheme& scheme() const { return scheme_; }
  [[nodiscard]] std::size_t size() const { return rows_; }
  [[nodiscard]] int num_variables() const { return scheme_.num_variables(); }

  /// 1-based labels of observation i.
  [[nodiscard]] std::span<const int> row(std::size_t i) const;
  [[nodiscard]] int at(std::size_t i, int j) const { return row(i)[static_cast<std::size_t>(j)]; }

  [[nodiscard]] const std::vector<Pattern>& patterns() const { return patterns_; }
  /// Index into patterns() for observation i.
  [[nodiscard]] std::size_t pattern_of(std::size_t i) const { return pattern_index_[i]; }

 private:
  CategoryScheme scheme_;
  std::size_t rows_ = 0;
  std::vector<int> cells_;  // row-major, 1-based
  std::vector<Pattern> patterns_;
  std::vector<std::size_t> pattern_index_;
};

struct Block {
  std::size_t offset = 0;
  std::size_t length = 0;
  bool operator==(const Block&) const = default;
};

/// Block map of the packed parameter vector: the weight block first, then one
/// block per (component k, variable j) in ascending k, then ascending j.
class BlockLayout {
 public:
  BlockLayout() = default;
  BlockLayout(int components, CategoryScheme scheme);

  [[nodiscard]] int components() const { return components_; }
  [[nodiscard]] const CategoryScheme& scheme() const { return scheme_; }
  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] const std::vector<Block>& blocks() const { return blocks_; }

  [[nodiscard]] Block eta_block() const { return blocks_.front(); }
  [[nodiscard]] Block pi_block(int k, int j) const {
    return blocks_[1 + static_cast<std::size_t>(k * scheme_.num_variables() + j)];
  }
  [[nodiscard]] std::size_t pi_index(int k, int j, int l) const {
    return pi_block(k, j).offset + static_cast<std::size_t>(l);
  }
  /// Block index (into blocks()) that owns coordinate i.
  [[nodiscard]] std::size_t block_of(std::size_t i) const { return owner_[i]; }

  bool operator==(const BlockLayout& other) const {
    return components_ == other.components_ && scheme_ == other.scheme_;
  }

 private:
  int components_ = 0;
  CategoryScheme scheme_;
  std::size_t size_ = 0;
  std::vector<Block> blocks_;
  std::vector<std::size_t> owner_;
};

/// Flat encoding of a parameter point. Values are not required to be feasible.
struct PackedVector {
  BlockLayout layout;
  Vector values;

  PackedVector() = default;
  explicit PackedVector(BlockLayout l) : layout(std::move(l)), values(Vector::Zero(static_cast<Eigen::Index>(layout.size()))) {}
  PackedVector(BlockLayout l, Vector v);

  [[nodiscard]] std::size_t size() const { return layout.size(); }
  [[nodiscard]] std::span<const double> block(const Block& b) const {
    return {values.data() + b.offset, b.length};
  }
  [[nodiscard]] std::span<double> block(const Block& b) { return {values.data() + b.offset, b.length}; }
};

/// Largest violation of the simplex constraints: max over blocks of |sum - 1|
/// and max over coordinates of max(0, -x_i).
double feasibility_residual(const BlockLayout& layout, const Vector& values);

/// Mixture weights eta and per-(k, j) categorical rows pi, always feasible.
class LcmParams {
 public:
  LcmParams() = default;
  /// pi[k][j] is the probability row of variable j in component k.
  LcmParams(Vector eta, const std::vector<std::vector<Vector>>& pi);

  /// Throws InputError unless every block lies on its simplex within tol.
  static LcmParams from_packed(const PackedVector& packed, double tol = kFeasibilityTol);

  [[nodiscard]] const PackedVector& pack() const { return packed_; }
  [[nodiscard]] const BlockLayout& layout() const { return packed_.layout; }
  [[nodiscard]] const CategoryScheme& scheme() const { return packed_.layout.scheme(); }
  [[nodiscard]] int components() const { return packed_.layout.components(); }

  [[nodiscard]] double eta(int k) const { return packed_.values[static_cast<Eigen::Index>(k)]; }
  [[nodiscard]] Vector eta() const { return packed_.values.head(components()); }
  [[nodiscard]] double pi(int k, int j, int l) const {
    return packed_.values[static_cast<Eigen::Index>(packed_.layout.pi_index(k, j, l))];
  }
  [[nodiscard]] Vector pi_row(int k, int j) const;

  /// Components relabelled so that new component k is old component order[k].
  [[nodiscard]] LcmParams permuted(std::span<const int> order) const;

 private:
  explicit LcmParams(PackedVector packed) : packed_(std::move(packed)) {}
  PackedVector packed_;
};

}  // namespace lcm
