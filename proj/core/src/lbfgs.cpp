#include "lcm/lbfgs.hpp"

namespace lcm {

LbfgsMemory::LbfgsMemory(std::size_t capacity, SigmaConvention convention)
    : capacity_(capacity), convention_(convention) {
  if (capacity_ < 1) throw InputError("L-BFGS memory must hold at least one pair");
}

void LbfgsMemory::clear() {
  s_.clear();
  y_.clear();
  sigma_ = 1.0;
  n_.resize(0, 0);
  m_.resize(0, 0);
}

bool LbfgsMemory::update(const Vector& s, const Vector& y) {
  const double sy = s.dot(y);
  if (!(sy > kCurvatureGuard)) return false;
  if (!s_.empty() && s.size() != s_.front().size()) throw InputError("L-BFGS pair dimension changed");
  s_.push_back(s);
  y_.push_back(y);
  if (s_.size() > capacity_) {
    s_.pop_front();
    y_.pop_front();
  }
  const double yy = y.squaredNorm();
  sigma_ = convention_ == SigmaConvention::curvature ? yy / sy : sy / yy;
  rebuild();
  return true;
}

Matrix LbfgsMemory::S() const {
  if (s_.empty()) return {};
  Matrix out(s_.front().size(), static_cast<Eigen::Index>(s_.size()));
  for (std::size_t i = 0; i < s_.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = s_[i];
  return out;
}

Matrix LbfgsMemory::Y() const {
  if (y_.empty()) return {};
  Matrix out(y_.front().size(), static_cast<Eigen::Index>(y_.size()));
  for (std::size_t i = 0; i < y_.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = y_[i];
  return out;
}

void LbfgsMemory::rebuild() {
  while (!s_.empty()) {
    const Matrix S_ = S();
    const Matrix Y_ = Y();
    const auto p = S_.cols();
    const Matrix SY = S_.transpose() * Y_;
    Matrix L = Matrix::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = 0; j < i; ++j) L(i, j) = SY(i, j);
    }
    m_.resize(2 * p, 2 * p);
    m_.topLeftCorner(p, p) = sigma_ * (S_.transpose() * S_);
    m_.topRightCorner(p, p) = L;
    m_.bottomLeftCorner(p, p) = L.transpose();
    m_.bottomRightCorner(p, p) = -Matrix(SY.diagonal().asDiagonal());
    n_.resize(S_.rows(), 2 * p);
    n_.leftCols(p) = sigma_ * S_;
    n_.rightCols(p) = Y_;
    m_lu_.compute(m_);
    if (m_lu_.isInvertible()) return;
    // Numerically dependent pairs: drop the oldest and try again.
    s_.pop_front();
    y_.pop_front();
  }
  n_.resize(0, 0);
  m_.resize(0, 0);
}

Vector LbfgsMemory::apply(const Vector& v) const {
  Vector out = sigma_ * v;
  if (s_.empty()) return out;
  out -= n_ * m_lu_.solve(n_.transpose() * v);
  return out;
}

Matrix LbfgsMemory::dense(Eigen::Index n) const {
  if (!s_.empty()) n = s_.front().size();
  Matrix B = sigma_ * Matrix::Identity(n, n);
  if (s_.empty()) return B;
  B -= n_ * m_lu_.solve(n_.transpose());
  return 0.5 * (B + B.transpose());
}

double QuadraticModel::value(const Vector& x) const {
  const Vector step = x - theta_t_;
  return f_t_ + step.dot(g_) + 0.5 * step.dot(memory_->apply(step));
}

Vector QuadraticModel::gradient(const Vector& x) const { return g_ + memory_->apply(x - theta_t_); }

}  // namespace lcm
