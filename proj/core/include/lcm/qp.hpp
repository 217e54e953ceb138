#pragma once

#include "lcm/simplex.hpp"

namespace lcm {

/// Solution of the SQP direction-finding problem
///   min 1/2 d^T B d + g^T d  s.t.  sum of d over each block = 0,  theta + d >= 0,
/// with multipliers for the stationarity condition B d + g = A^T lambda + mu.
struct QpSolution {
  Vector d;
  Vector lambda;  // one per block
  Vector mu;      // one per coordinate, zero on inactive bounds
  int iterations = 0;
};

/// Primal active-set method on the bound constraints. Equality constraints are
/// handled by a null-space basis of the free coordinates of each block. theta
/// must be feasible and B positive definite. Throws NumericalError after
/// max_iter working-set changes.
QpSolution solve_simplex_qp(const Matrix& B, const Vector& g, const Vector& theta, const ProductSimplex& geom,
                            int max_iter = 200);

}  // namespace lcm
