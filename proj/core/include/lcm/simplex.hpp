#pragma once

#include <span>
#include <vector>

#include "lcm/types.hpp"

namespace lcm {

/// Cartesian product of probability simplexes, one per block.
class ProductSimplex {
 public:
  explicit ProductSimplex(std::vector<std::size_t> dims);
  explicit ProductSimplex(const BlockLayout& layout);

  [[nodiscard]] const std::vector<Block>& blocks() const { return blocks_; }
  [[nodiscard]] std::size_t size() const { return size_; }

 private:
  std::vector<Block> blocks_;
  std::size_t size_ = 0;
};

/// Euclidean projection onto {y >= 0, sum y = 1} by the sort-and-threshold rule:
/// sort descending, find the last index where the shifted value stays positive,
/// shift every coordinate by that threshold and clip at zero.
Vector project_simplex(const Vector& x);

/// In-place variant used by the solvers' inner loops.
void project_simplex_inplace(std::span<double> x);

/// Blockwise projection onto the product set.
Vector project_product(const Vector& x, const ProductSimplex& geom);
PackedVector project_product(const PackedVector& x, const ProductSimplex& geom);

}  // namespace lcm

namespace lcm {

/// Removes each block's mean, i.e. the orthogonal projection onto the
/// directions that keep every block sum fixed.
Vector tangent_component(const Vector& v, const ProductSimplex& geom);

}  // namespace lcm
