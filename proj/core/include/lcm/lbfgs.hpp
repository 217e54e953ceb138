#pragma once

#include <cstddef>
#include <deque>

#include "lcm/types.hpp"

namespace lcm {

/// Scaling of the leading sigma*I term of the compact Hessian approximation.
enum class SigmaConvention {
  curvature,  // sigma = y^T y / s^T y, the usual initial Hessian scale
  printed,    // sigma = y^T s / y^T y, the inverse-Hessian scale
};

/// Pairs with y^T s at or below this are not stored.
inline constexpr double kCurvatureGuard = 1e-12;

/// Limited-memory BFGS approximation of the Hessian in compact form,
///   B = sigma I - N M^{-1} N^T,  N = [sigma S, Y],
///   M = [[sigma S^T S, L], [L^T, -D]],
/// where L is the strictly lower triangle of S^T Y and D its diagonal.
class LbfgsMemory {
 public:
  explicit LbfgsMemory(std::size_t capacity = 5, SigmaConvention convention = SigmaConvention::curvature);

  /// Stores (s, y) unless y^T s <= kCurvatureGuard; evicts the oldest pair
  /// when full. Returns whether the pair was kept.
  bool update(const Vector& s, const Vector& y);
  void clear();

  [[nodiscard]] std::size_t size() const { return s_.size(); }
  [[nodiscard]] std::size_t capacity() const { return capacity_; }
  [[nodiscard]] double sigma() const { return sigma_; }
  [[nodiscard]] SigmaConvention convention() const { return convention_; }

  [[nodiscard]] Matrix S() const;
  [[nodiscard]] Matrix Y() const;
  [[nodiscard]] const Matrix& n_factor() const { return n_; }
  [[nodiscard]] const Matrix& m_factor() const { return m_; }

  /// B v without forming B.
  [[nodiscard]] Vector apply(const Vector& v) const;
  /// Explicit B of dimension n (n is taken from the stored pairs, or passed
  /// when the memory is empty).
  [[nodiscard]] Matrix dense(Eigen::Index n) const;

 private:
  void rebuild();

  std::size_t capacity_;
  SigmaConvention convention_;
  std::deque<Vector> s_;
  std::deque<Vector> y_;
  double sigma_ = 1.0;
  Matrix n_;
  Matrix m_;
  Eigen::FullPivLU<Matrix> m_lu_;
};

/// Quadratic model of f around theta_t:
///   q(x) = f_t + (x - theta_t)^T g + 1/2 (x - theta_t)^T B (x - theta_t).
class QuadraticModel {
 public:
  QuadraticModel(double f_t, Vector g, Vector theta_t, const LbfgsMemory& memory)
      : f_t_(f_t), g_(std::move(g)), theta_t_(std::move(theta_t)), memory_(&memory) {}

  [[nodiscard]] double value(const Vector& x) const;
  [[nodiscard]] Vector gradient(const Vector& x) const;
  [[nodiscard]] const Vector& center() const { return theta_t_; }

 private:
  double f_t_;
  Vector g_;
  Vector theta_t_;
  const LbfgsMemory* memory_;
};

}  // namespace lcm
