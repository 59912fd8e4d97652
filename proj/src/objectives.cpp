#include "regret/objectives.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

namespace regret {

void require_spd(const Matrix& M, const char* what, double tol) {
  if (M.rows() == 0 || M.rows() != M.cols()) {
    throw std::invalid_argument(std::string(what) + " must be square and non-empty");
  }
  if (((M - M.transpose()).array().abs() > tol).any()) {
    throw std::invalid_argument(std::string(what) + " is not symmetric");
  }
  Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(std::string(what) + " is not positive-definite");
  }
}

double smallest_eigenvalue(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetric, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

QuadraticObjective::QuadraticObjective(Matrix A, Vector b, double offset)
    : A_(std::move(A)), b_(std::move(b)), offset_(offset) {
  require_spd(A_, "quadratic objective matrix A");
  if (b_.size() != A_.rows()) {
    throw std::invalid_argument("quadratic objective: b has wrong dimension");
  }
}

namespace {

void check_point(const Vector& x, Eigen::Index dim, const char* who) {
  if (x.size() != dim) throw std::invalid_argument(std::string(who) + ": point has wrong dimension");
}

}  // namespace

double QuadraticObjective::value(const Vector& x) const {
  check_point(x, b_.size(), "quadratic objective");
  const Vector e = x - b_;
  return offset_ + 0.5 * e.dot(A_ * e);
}

Vector QuadraticObjective::gradient(const Vector& x) const {
  check_point(x, b_.size(), "quadratic objective");
  return A_ * (x - b_);
}

namespace {

struct RosenbrockParts {
  double g;     // f_r(u, v)
  double dgdu;
  double dgdv;
};

RosenbrockParts rosenbrock_parts(const Vector& x) {
  check_point(x, 2, "rescaled Rosenbrock");
  const double u = 0.5 * x[0];
  const double v = 4.5 * x[1];
  const double r = v - u * u;
  return {(1.0 - u) * (1.0 - u) + 100.0 * r * r,
          -2.0 * (1.0 - u) - 400.0 * u * r, 200.0 * r};
}

}  // namespace

double RescaledRosenbrock::value(const Vector& x) const {
  return 0.1 * std::sqrt(rosenbrock_parts(x).g);
}

Vector RescaledRosenbrock::gradient(const Vector& x) const {
  const auto p = rosenbrock_parts(x);
  Vector grad = Vector::Zero(2);
  if (p.g <= 0.0) return grad;
  const double scale = 0.1 / (2.0 * std::sqrt(p.g));
  grad[0] = scale * p.dgdu * 0.5;
  grad[1] = scale * p.dgdv * 4.5;
  return grad;
}

std::optional<Vector> RescaledRosenbrock::optimum() const {
  Vector opt(2);
  opt << 2.0, 1.0 / 4.5;
  return opt;
}

FunctionObjective::FunctionObjective(int dim, ValueFn value, GradFn grad,
                                     std::optional<Vector> optimum,
                                     std::optional<double> optimal_value,
                                     bool convex)
    : dim_(dim),
      value_(std::move(value)),
      grad_(std::move(grad)),
      optimum_(std::move(optimum)),
      optimal_value_(optimal_value),
      convex_(convex) {
  if (dim_ <= 0) throw std::invalid_argument("objective dimension must be positive");
  if (!value_ || !grad_) throw std::invalid_argument("objective callbacks must be set");
  if (optimum_ && optimum_->size() != dim_) {
    throw std::invalid_argument("objective optimum has wrong dimension");
  }
}

double FunctionObjective::value(const Vector& x) const { return value_(x); }

Vector FunctionObjective::gradient(const Vector& x) const {
  Vector g = grad_(x);
  if (g.size() != dim_) throw std::runtime_error("objective gradient has wrong dimension");
  return g;
}

std::shared_ptr<const QuadraticObjective> make_quadratic(Matrix A, Vector b) {
  return std::make_shared<const QuadraticObjective>(std::move(A), std::move(b));
}

ObjectivePtr make_rescaled_rosenbrock() {
  return std::make_shared<const RescaledRosenbrock>();
}

std::shared_ptr<const QuadraticObjective> make_random_spd_quadratic(
    int dim, std::uint64_t seed) {
  if (dim <= 0) throw std::invalid_argument("random quadratic: dim must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix M(dim, dim);
  for (Eigen::Index j = 0; j < M.cols(); ++j)
    for (Eigen::Index i = 0; i < M.rows(); ++i) M(i, j) = normal(rng);
  Vector b(dim);
  for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = normal(rng);

  Matrix A(dim, dim);
  A.setZero();
  A.selfadjointView<Eigen::Lower>().rankUpdate(M.transpose());
  A.triangularView<Eigen::StrictlyUpper>() =
      A.triangularView<Eigen::StrictlyLower>().transpose();
  A.diagonal().array() += 1e-3;
  return make_quadratic(std::move(A), std::move(b));
}

}  // namespace regret
