#include "regret/penalty.hpp"

#include <stdexcept>
#include <utility>

#include "regret/objectives.hpp"

namespace regret {

QuadraticPenalty::QuadraticPenalty(Matrix C) : C_(std::move(C)) {
  require_spd(C_, "penalty matrix C");
  dim_ = static_cast<int>(C_.rows());
  llt_.compute(C_);
}

QuadraticPenalty::QuadraticPenalty(int dim, double gamma)
    : dim_(dim), gamma_(gamma) {}

Matrix QuadraticPenalty::C() const {
  if (gamma_) return Matrix::Identity(dim_, dim_) / *gamma_;
  return C_;
}

QuadraticPenalty QuadraticPenalty::from_learning_rate(double gamma, int dim) {
  if (!(gamma > 0.0)) throw std::invalid_argument("penalty: learning rate must be > 0");
  if (dim <= 0) throw std::invalid_argument("penalty: dim must be >= 1");
  return QuadraticPenalty(dim, gamma);
}

void QuadraticPenalty::check_dim(const Vector& v) const {
  if (v.size() != dim_) throw std::invalid_argument("penalty: dimension mismatch");
}

double QuadraticPenalty::phi(const Vector& x) const {
  check_dim(x);
  if (gamma_) return 0.5 * x.squaredNorm() / *gamma_;
  return 0.5 * x.dot(C_ * x);
}

Vector QuadraticPenalty::phi_grad(const Vector& x) const {
  check_dim(x);
  if (gamma_) return x / *gamma_;
  return C_ * x;
}

double QuadraticPenalty::phi_conj(const Vector& p) const {
  check_dim(p);
  if (gamma_) return 0.5 * *gamma_ * p.squaredNorm();
  return 0.5 * p.dot(llt_.solve(p));
}

Vector QuadraticPenalty::phi_conj_grad(const Vector& p) const {
  check_dim(p);
  if (gamma_) return *gamma_ * p;
  return llt_.solve(p);
}

Matrix QuadraticPenalty::solve(const Matrix& rhs) const {
  if (rhs.rows() != dim_) throw std::invalid_argument("penalty: dimension mismatch");
  if (gamma_) return *gamma_ * rhs;
  return llt_.solve(rhs);
}

double QuadraticPenalty::growth_constant() const {
  if (gamma_) return 0.5 / *gamma_;
  return 0.5 * smallest_eigenvalue(C_);
}

}  // namespace regret
