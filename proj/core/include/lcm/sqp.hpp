#pragma once

#include "lcm/model.hpp"
#include "lcm/qp.hpp"
#include "lcm/spg.hpp"
#include "lcm/trace.hpp"

namespace lcm {

struct SqpConfig {
  double kkt_tol = 1e-6;
  int max_iter = 500;
  int max_line_search = 30;
  int qp_active_set_max = 200;
  /// Rescale the identity starting matrix by y^T y / s^T y before the first update.
  bool scale_initial_matrix = true;
  double armijo = 1e-4;

  void validate() const;
};

/// Penalty weights of the L1 merit function: one per block equality and one
/// per nonnegativity bound.
struct Penalty {
  Vector equality;
  Vector bounds;
};

/// phi = f + sum_b rho_b |sum(block b) - 1| + sum_i rho_i |min(0, theta_i)|.
double merit_value(double f_value, const Vector& theta, const Penalty& rho, const ProductSimplex& geom);

/// rho_j = max((rho_j_prev + |mu_j|) / 2, |mu_j|), elementwise.
Vector update_penalty(const Vector& rho_prev, const Vector& mu);

struct DampedUpdate {
  Matrix B;
  double gamma = 1.0;
  double qs = 0.0;   // q^T s
  double sBs = 0.0;  // s^T B s (before the update)
  bool applied = false;
  bool positive_definite = true;  // Cholesky of the returned B succeeded
};

/// Powell-damped BFGS update with q = gamma eta + (1 - gamma) B s, where
/// gamma = 1 if s^T eta >= 0.2 s^T B s and 0.8 s^T B s / (s^T B s - s^T eta)
/// otherwise. Skipped when s^T B s <= 1e-14.
DampedUpdate damped_bfgs_update(const Matrix& B, const Vector& s, const Vector& eta);

/// Natural KKT residual of the simplex-constrained problem for multipliers
/// lambda: max_i |min(theta_i, g_i - lambda_b(i))| + feasibility violation.
double kkt_residual(const Vector& theta, const Vector& g, const Vector& lambda, const ProductSimplex& geom);

/// First-order equality multipliers at theta: per block, the mean of g over
/// the coordinates with theta_i > 0 (over the whole block if none is positive).
Vector first_order_multipliers(const Vector& theta, const Vector& g, const ProductSimplex& geom);

struct SqpDiagnostics {
  int updates_applied = 0;
  int updates_skipped = 0;
  int cholesky_failures = 0;
  double min_damping_ratio = 1.0;  // min over applied updates of q^T s / (0.2 s^T B s)
  double max_qp_residual = 0.0;    // max blockwise |sum d| over all QP solves
  double min_bound_slack = 0.0;    // min over QP solves of min_i (theta + d)_i
};

struct SqpResult {
  FitResult fit;
  Matrix B;
  Vector lambda;
  Penalty rho;
  SqpDiagnostics diagnostics;
};

/// Generic SQP on a product of simplexes; x0 must be feasible.
struct SqpRawResult {
  Vector x;
  int iterations = 0;
  bool converged = false;
  std::string status;
  Matrix B;
  Vector lambda;
  Penalty rho;
  SqpDiagnostics diagnostics;
  std::vector<Vector> iterates;
};
SqpRawResult minimize_sqp(const SmoothObjective& objective, const Vector& x0, const ProductSimplex& geom,
                          const SqpConfig& cfg = {});

/// Maximum-likelihood fit of the LCM by SQP with a damped BFGS Hessian.
SqpResult fit_sqp(const Dataset& data, const LcmParams& init, const SqpConfig& cfg = {});

}  // namespace lcm
