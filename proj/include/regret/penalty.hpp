#pragma once

#include <memory>
#include <optional>

#include <Eigen/Cholesky>

#include "regret/types.hpp"

namespace regret {

/// Increment penalty φ on the steps Δx_t of a trajectory.
///
/// The interface covers what the optimality dynamics need from a Legendre
/// penalty: φ, ∇φ, the convex conjugate φ*, ∇φ*, and the reflection
/// φ̃(x) = φ(−x). Only the quadratic instance is implemented.
class Penalty {
 public:
  virtual ~Penalty() = default;

  virtual int dim() const = 0;
  virtual double phi(const Vector& x) const = 0;
  virtual Vector phi_grad(const Vector& x) const = 0;
  virtual double phi_conj(const Vector& p) const = 0;
  virtual Vector phi_conj_grad(const Vector& p) const = 0;

  double reflected(const Vector& x) const { return phi(-x); }
  /// φ̃*(p) = φ*(−p).
  double reflected_conj(const Vector& p) const { return phi_conj(-p); }
  /// ∇φ̃*(p) = −∇φ*(−p).
  Vector reflected_conj_grad(const Vector& p) const { return -phi_conj_grad(-p); }
};

/// φ(z) = ½ zᵀCz with C symmetric positive-definite. C⁻¹ is applied through
/// a Cholesky factorization computed once at construction.
class QuadraticPenalty final : public Penalty {
 public:
  explicit QuadraticPenalty(Matrix C);

  /// C = γ⁻¹·I, i.e. φ(x) = γ⁻¹/2 ‖x‖².
  static QuadraticPenalty from_learning_rate(double gamma, int dim);

  int dim() const override { return dim_; }
  double phi(const Vector& x) const override;
  Vector phi_grad(const Vector& x) const override;
  double phi_conj(const Vector& p) const override;
  Vector phi_conj_grad(const Vector& p) const override;

  /// Dense C. Isotropic penalties do not store it, so this builds a copy.
  Matrix C() const;
  /// C⁻¹·rhs via the cached factorization.
  Matrix solve(const Matrix& rhs) const;
  /// γ when C = γ⁻¹·I exactly.
  std::optional<double> learning_rate() const { return gamma_; }

  /// Growth constants (c, p) with φ(x) ≥ c‖x‖^p: p = 2, c = ½λ_min(C).
  double growth_constant() const;
  static constexpr double growth_exponent() { return 2.0; }

 private:
  QuadraticPenalty(int dim, double gamma);

  void check_dim(const Vector& v) const;

  int dim_;
  Matrix C_;  // empty when isotropic
  Eigen::LLT<Matrix> llt_;
  std::optional<double> gamma_;
};

}  // namespace regret
