#include "lcm/qp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace lcm {

namespace {

// Orthonormal basis of per-block sum-zero vectors supported on free coordinates.
Matrix free_null_space(const ProductSimplex& geom, const std::vector<bool>& fixed) {
  const auto n = static_cast<Eigen::Index>(geom.size());
  std::vector<std::vector<Eigen::Index>> groups;
  Eigen::Index cols = 0;
  for (const Block& b : geom.blocks()) {
    std::vector<Eigen::Index> free;
    for (std::size_t i = b.offset; i < b.offset + b.length; ++i) {
      if (!fixed[i]) free.push_back(static_cast<Eigen::Index>(i));
    }
    if (free.size() > 1) cols += static_cast<Eigen::Index>(free.size()) - 1;
    groups.push_back(std::move(free));
  }
  Matrix Z = Matrix::Zero(n, cols);
  Eigen::Index col = 0;
  for (const auto& free : groups) {
    for (std::size_t i = 1; i < free.size(); ++i, ++col) {
      const double scale = 1.0 / std::sqrt(static_cast<double>(i * (i + 1)));
      for (std::size_t r = 0; r < i; ++r) Z(free[r], col) = scale;
      Z(free[i], col) = -static_cast<double>(i) * scale;
    }
  }
  return Z;
}

}  // namespace

QpSolution solve_simplex_qp(const Matrix& B, const Vector& g, const Vector& theta, const ProductSimplex& geom,
                            int max_iter) {
  const auto n = static_cast<Eigen::Index>(geom.size());
  if (B.rows() != n || B.cols() != n || g.size() != n || theta.size() != n) {
    throw InputError("QP dimensions do not match the product simplex");
  }
  const auto nz = static_cast<std::size_t>(n);
  std::vector<bool> fixed(nz, false);
  for (std::size_t i = 0; i < nz; ++i) fixed[i] = theta[static_cast<Eigen::Index>(i)] <= 0.0;
  // Keep at least one free coordinate per block.
  for (const Block& b : geom.blocks()) {
    bool any_free = false;
    for (std::size_t i = b.offset; i < b.offset + b.length; ++i) any_free = any_free || !fixed[i];
    if (!any_free) fixed[b.offset] = false;
  }

  QpSolution out;
  out.d = Vector::Zero(n);
  for (std::size_t i = 0; i < nz; ++i) {
    if (fixed[i]) out.d[static_cast<Eigen::Index>(i)] = -theta[static_cast<Eigen::Index>(i)];
  }
  const double scale = 1.0 + g.lpNorm<Eigen::Infinity>();

  // After an unblocked full step d is the working-set minimizer up to
  // rounding, so the next pass goes straight to the multiplier test instead
  // of chasing a noise-level correction.
  bool at_subspace_minimizer = false;
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    const Vector r = B * out.d + g;
    const Matrix Z = free_null_space(geom, fixed);
    Vector p = Vector::Zero(n);
    if (Z.cols() > 0 && !at_subspace_minimizer) {
      const Matrix reduced = Z.transpose() * B * Z;
      const Eigen::LLT<Matrix> llt(reduced);
      if (llt.info() != Eigen::Success) throw NumericalError("QP reduced Hessian is not positive definite");
      p = -Z * llt.solve(Z.transpose() * r);
    }

    if (p.lpNorm<Eigen::Infinity>() <= 1e-13 * (1.0 + out.d.lpNorm<Eigen::Infinity>())) {
      // Stationary on the working set: recover multipliers and test their signs.
      const Vector r_opt = B * out.d + g;
      out.lambda = Vector::Zero(static_cast<Eigen::Index>(geom.blocks().size()));
      out.mu = Vector::Zero(n);
      for (std::size_t bi = 0; bi < geom.blocks().size(); ++bi) {
        const Block& b = geom.blocks()[bi];
        double sum = 0.0;
        int count = 0;
        for (std::size_t i = b.offset; i < b.offset + b.length; ++i) {
          if (!fixed[i]) {
            sum += r_opt[static_cast<Eigen::Index>(i)];
            ++count;
          }
        }
        const double lambda = sum / count;
        out.lambda[static_cast<Eigen::Index>(bi)] = lambda;
        for (std::size_t i = b.offset; i < b.offset + b.length; ++i) {
          if (fixed[i]) out.mu[static_cast<Eigen::Index>(i)] = r_opt[static_cast<Eigen::Index>(i)] - lambda;
        }
      }
      Eigen::Index worst = -1;
      double worst_mu = -1e-11 * scale;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (fixed[static_cast<std::size_t>(i)] && out.mu[i] < worst_mu) {
          worst_mu = out.mu[i];
          worst = i;
        }
      }
      if (worst < 0) {
        out.mu = out.mu.cwiseMax(0.0);
        return out;
      }
      fixed[static_cast<std::size_t>(worst)] = false;
      at_subspace_minimizer = false;
      continue;
    }

    // Longest step along p that keeps theta + d >= 0.
    double alpha = 1.0;
    Eigen::Index blocking = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (fixed[static_cast<std::size_t>(i)] || p[i] >= 0.0) continue;
      const double room = theta[i] + out.d[i];
      const double a = room <= 0.0 ? 0.0 : room / -p[i];
      if (a < alpha) {
        alpha = a;
        blocking = i;
      }
    }
    out.d += alpha * p;
    if (blocking >= 0) {
      fixed[static_cast<std::size_t>(blocking)] = true;
      out.d[blocking] = -theta[blocking];
    } else {
      at_subspace_minimizer = true;
    }
  }
  throw NumericalError("QP active-set iteration limit reached (degenerate subproblem)");
}

}  // namespace lcm
