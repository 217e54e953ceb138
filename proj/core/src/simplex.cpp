#include "lcm/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace lcm {

namespace {
constexpr double kEpsilon = std::numeric_limits<double>::epsilon();
}  // namespace

ProductSimplex::ProductSimplex(std::vector<std::size_t> dims) {
  for (std::size_t d : dims) {
    if (d < 1) throw InputError("simplex blocks need dimension >= 1");
    blocks_.push_back(Block{size_, d});
    size_ += d;
  }
}

ProductSimplex::ProductSimplex(const BlockLayout& layout) : blocks_(layout.blocks()), size_(layout.size()) {}

void project_simplex_inplace(std::span<double> x) {
  if (x.empty()) throw InputError("cannot project an empty vector");
  double total = 0.0;
  bool nonnegative = true;
  for (double v : x) {
    if (!std::isfinite(v)) throw InputError("cannot project a vector with non-finite entries");
    total += v;
    nonnegative = nonnegative && v >= 0.0;
  }
  // Points already on the simplex up to summation rounding are fixed points;
  // returning them untouched makes the projection exactly idempotent.
  if (nonnegative && std::abs(total - 1.0) <= 4.0 * static_cast<double>(x.size()) * kEpsilon) return;

  std::vector<double> u(x.begin(), x.end());
  std::stable_sort(u.begin(), u.end(), std::greater<>());

  double prefix = 0.0;
  double lambda_sum = 0.0;
  std::size_t rho = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    prefix += u[j];
    const double shift = (1.0 - prefix) / static_cast<double>(j + 1);
    if (u[j] + shift > 0.0) {
      rho = j + 1;
      lambda_sum = prefix;
    }
  }
  // rho >= 1 always: u_1 + (1 - u_1) = 1 > 0.
  const double lambda = (1.0 - lambda_sum) / static_cast<double>(rho);
  for (double& v : x) v = std::max(v + lambda, 0.0);
}

Vector project_simplex(const Vector& x) {
  Vector out = x;
  project_simplex_inplace({out.data(), static_cast<std::size_t>(out.size())});
  return out;
}

Vector project_product(const Vector& x, const ProductSimplex& geom) {
  if (static_cast<std::size_t>(x.size()) != geom.size()) {
    throw InputError("vector length " + std::to_string(x.size()) + " does not match product simplex size " +
                     std::to_string(geom.size()));
  }
  Vector out = x;
  for (const Block& b : geom.blocks()) project_simplex_inplace({out.data() + b.offset, b.length});
  return out;
}

PackedVector project_product(const PackedVector& x, const ProductSimplex& geom) {
  return PackedVector(x.layout, project_product(x.values, geom));
}

}  // namespace lcm

namespace lcm {

Vector tangent_component(const Vector& v, const ProductSimplex& geom) {
  if (static_cast<std::size_t>(v.size()) != geom.size()) {
    throw InputError("vector length " + std::to_string(v.size()) + " does not match product simplex size " +
                     std::to_string(geom.size()));
  }
  Vector out = v;
  for (const Block& b : geom.blocks()) {
    auto seg = out.segment(static_cast<Eigen::Index>(b.offset), static_cast<Eigen::Index>(b.length));
    seg.array() -= seg.mean();
  }
  return out;
}

}  // namespace lcm
