#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

#include <Eigen/Cholesky>

#include "regret/types.hpp"

namespace regret {

/// A differentiable scalar function on R^d.
///
/// Implementations are immutable after construction, so a single instance
/// may be evaluated concurrently from several threads.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual int dim() const = 0;

  /// Known minimizer x*, if any.
  virtual std::optional<Vector> optimum() const { return std::nullopt; }
  /// Known optimal value f*, if any.
  virtual std::optional<double> optimal_value() const { return std::nullopt; }

  /// True when the function is known to be convex. Solvers use this to
  /// decide whether a critical point is certified as the global minimizer.
  virtual bool is_convex() const { return false; }
};

using ObjectivePtr = std::shared_ptr<const Objective>;

/// f(x) = offset + ½(x−b)ᵀA(x−b) with A symmetric positive-definite.
class QuadraticObjective final : public Objective {
 public:
  /// Throws std::invalid_argument if A is not square, not symmetric within
  /// 1e-12 elementwise, not positive-definite, or if b has the wrong size.
  QuadraticObjective(Matrix A, Vector b, double offset = 0.0);

  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  int dim() const override { return static_cast<int>(b_.size()); }
  std::optional<Vector> optimum() const override { return b_; }
  std::optional<double> optimal_value() const override { return offset_; }
  bool is_convex() const override { return true; }

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  double offset() const { return offset_; }

 private:
  Matrix A_;
  Vector b_;
  double offset_;
};

/// (x, y) ↦ 0.1·√(f_r(0.5x, 4.5y)) where f_r is the standard Rosenbrock
/// function (1−u)² + 100(v−u²)². Minimizer (2, 2/9), optimal value 0.
///
/// The square root has a kink at the minimizer; the gradient there is
/// defined as the zero vector.
class RescaledRosenbrock final : public Objective {
 public:
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  int dim() const override { return 2; }
  std::optional<Vector> optimum() const override;
  std::optional<double> optimal_value() const override { return 0.0; }
};

/// Wraps user-supplied closures. Used by the Python bindings and tests.
class FunctionObjective final : public Objective {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradFn = std::function<Vector(const Vector&)>;

  FunctionObjective(int dim, ValueFn value, GradFn grad,
                    std::optional<Vector> optimum = std::nullopt,
                    std::optional<double> optimal_value = std::nullopt,
                    bool convex = false);

  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  int dim() const override { return dim_; }
  std::optional<Vector> optimum() const override { return optimum_; }
  std::optional<double> optimal_value() const override {
    return optimal_value_;
  }
  bool is_convex() const override { return convex_; }

 private:
  int dim_;
  ValueFn value_;
  GradFn grad_;
  std::optional<Vector> optimum_;
  std::optional<double> optimal_value_;
  bool convex_;
};

std::shared_ptr<const QuadraticObjective> make_quadratic(Matrix A, Vector b);

ObjectivePtr make_rescaled_rosenbrock();

/// A = MᵀM + 1e-3·I and b ~ N(0, I), with M a seeded standard-normal
/// dim×dim matrix. Deterministic for a fixed (dim, seed).
std::shared_ptr<const QuadraticObjective> make_random_spd_quadratic(
    int dim, std::uint64_t seed);

/// Smallest eigenvalue of a symmetric matrix (dense eigensolve).
double smallest_eigenvalue(const Matrix& symmetric);

/// Throws std::invalid_argument unless M is square, symmetric within `tol`
/// elementwise and admits a Cholesky factorization.
void require_spd(const Matrix& M, const char* what, double tol = 1e-12);

}  // namespace regret
