#include "lcm/covariance.hpp"

#include <cmath>

namespace lcm {

namespace {

Covariance finish(Matrix cov) {
  cov = 0.5 * (cov + cov.transpose());
  Vector se = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return Covariance{std::move(cov), std::move(se)};
}

}  // namespace

Covariance observed_information(const Matrix& B) {
  if (B.rows() != B.cols() || B.rows() == 0) throw InputError("curvature matrix must be square and non-empty");
  const Eigen::LLT<Matrix> llt(B);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(
        "curvature matrix is not positive definite; run more iterations or use a larger memory before "
        "computing standard errors");
  }
  return finish(llt.solve(Matrix::Identity(B.rows(), B.cols())));
}

Matrix tangent_basis(const ProductSimplex& geom) {
  const auto n = static_cast<Eigen::Index>(geom.size());
  Eigen::Index cols = 0;
  for (const Block& b : geom.blocks()) cols += static_cast<Eigen::Index>(b.length) - 1;
  Matrix Z = Matrix::Zero(n, cols);
  Eigen::Index col = 0;
  for (const Block& b : geom.blocks()) {
    // Helmert contrasts: column i is (1, ..., 1, -i, 0, ...) / sqrt(i (i + 1)).
    const auto off = static_cast<Eigen::Index>(b.offset);
    for (Eigen::Index i = 1; i < static_cast<Eigen::Index>(b.length); ++i, ++col) {
      const double scale = 1.0 / std::sqrt(static_cast<double>(i * (i + 1)));
      for (Eigen::Index r = 0; r < i; ++r) Z(off + r, col) = scale;
      Z(off + i, col) = -static_cast<double>(i) * scale;
    }
  }
  return Z;
}

Covariance observed_information(const Matrix& B, const ProductSimplex& geom) {
  if (B.rows() != B.cols() || static_cast<std::size_t>(B.rows()) != geom.size()) {
    throw InputError("curvature matrix does not match the parameter layout");
  }
  const Matrix Z = tangent_basis(geom);
  if (Z.cols() == 0) return finish(Matrix::Zero(B.rows(), B.cols()));
  const Matrix reduced = Z.transpose() * B * Z;
  const Eigen::LLT<Matrix> llt(reduced);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(
        "curvature matrix is not positive definite on the feasible directions; run more iterations or use a "
        "larger memory before computing standard errors");
  }
  return finish(Z * llt.solve(Z.transpose()));
}

double normal_quantile_two_sided(double level) {
  if (!(level > 0.0 && level < 1.0)) throw InputError("confidence level must lie in (0, 1)");
  // Solve erfc(z / sqrt 2) = 1 - level by bisection; erfc is monotone.
  const double target = 1.0 - level;
  double lo = 0.0;
  double hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::erfc(mid / std::sqrt(2.0)) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<Interval> confidence_intervals(const Vector& estimate, const Covariance& cov, double level) {
  if (estimate.size() != cov.standard_errors.size()) throw InputError("estimate and covariance sizes differ");
  const double z = normal_quantile_two_sided(level);
  std::vector<Interval> out;
  out.reserve(static_cast<std::size_t>(estimate.size()));
  for (Eigen::Index i = 0; i < estimate.size(); ++i) {
    const double se = cov.standard_errors[i];
    out.push_back({estimate[i], se, estimate[i] - z * se, estimate[i] + z * se});
  }
  return out;
}

}  // namespace lcm
