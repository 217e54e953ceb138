#pragma once

#include <vector>

#include "lcm/simplex.hpp"

namespace lcm {

struct Covariance {
  Matrix covariance;
  Vector standard_errors;
};

/// Asymptotic covariance from a positive definite approximation B of the
/// Hessian of f = -L: the plain inverse B^{-1}. Throws NumericalError when the
/// Cholesky factorisation of B fails.
Covariance observed_information(const Matrix& B);

/// Same, restricted to the tangent space of the product of simplexes:
/// Z (Z^T B Z)^{-1} Z^T with Z an orthonormal basis of the per-block
/// sum-to-zero directions. This is the covariance of the constrained MLE.
Covariance observed_information(const Matrix& B, const ProductSimplex& geom);

/// Orthonormal basis of {v : sum of v over each block = 0}.
Matrix tangent_basis(const ProductSimplex& geom);

struct Interval {
  double estimate = 0.0;
  double standard_error = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Two-sided standard normal quantile for the given coverage, e.g. 1.95996 for 0.95.
double normal_quantile_two_sided(double level);

/// estimate_i -/+ z * se_i for each coordinate.
std::vector<Interval> confidence_intervals(const Vector& estimate, const Covariance& cov, double level = 0.95);

}  // namespace lcm
