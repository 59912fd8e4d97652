#pragma once

#include "regret/objectives.hpp"
#include "regret/penalty.hpp"
#include "regret/regret_core.hpp"
#include "regret/types.hpp"

namespace regret {

/// Ψ(x) = ½(√(x² + 4x) − x), x ≥ 0. Maps the relative-smoothness (or
/// convexity) constant of a quadratic f to that of the infinite-horizon value
/// function. Increasing, Ψ(0) = 0, Ψ(x) < 1.
double psi(double x);

/// The SPD matrix Φ̃ with Φ̃⁻¹ = C⁻¹ + (A + Φ̃)⁻¹, so that ∇J^∞(x) = Φ̃(x − b)
/// for f = ½(x−b)ᵀA(x−b) and φ = ½zᵀCz.
struct PhiTildeSolution {
  Matrix phi_tilde;
  /// ‖Φ̃⁻¹ − C⁻¹ − (A+Φ̃)⁻¹‖_F at the returned iterate.
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Fixed-point iteration Φ̃ ← (C⁻¹ + (A+Φ̃)⁻¹)⁻¹ from Φ̃ = C, symmetrized each
/// step, until the Frobenius residual is ≤ tol. Non-convergence is reported
/// through `converged`, not thrown. Throws std::invalid_argument for non-SPD
/// or mismatched inputs and std::runtime_error if an intermediate matrix
/// fails to factor.
PhiTildeSolution solve_phi_tilde(const Matrix& A, const Matrix& C, double tol = 1e-12,
                                 int max_iters = 500);

/// Frobenius residual of the fixed-point equation at `phi_tilde`.
double phi_tilde_residual(const Matrix& A, const Matrix& C, const Matrix& phi_tilde);

/// Spectral route to Φ̃: with C = LLᵀ and L⁻¹AL⁻ᵀ = QΛQᵀ the problem
/// decouples into scalar modes with root Ψ(λ_i), giving Φ̃ = L·Q·Ψ(Λ)·Qᵀ·Lᵀ.
/// Independent of the fixed-point iteration; used to cross-check it.
Matrix phi_tilde_spectral(const Matrix& A, const Matrix& C);

/// Extreme generalized eigenvalues of (Φ̃, C), i.e. of C⁻¹Φ̃. These are the
/// relative-smoothness (λ) and relative-convexity (μ) constants of J^∞ with
/// respect to φ.
struct RelativeConstants {
  double lambda;
  double mu;
};
RelativeConstants relative_constants(const Matrix& phi_tilde, const Matrix& C);

/// x' = x − C⁻¹Φ̃(x − b). Throws std::invalid_argument if `sol` is unconverged.
Vector optimal_step(const Vector& x, const PhiTildeSolution& sol,
                    const QuadraticPenalty& phi, const Vector& b);

/// J^∞(x) = ½(x−b)ᵀΦ̃(x−b).
double quadratic_value(const Vector& x, const PhiTildeSolution& sol, const Vector& b);

/// x_0, then T applications of optimal_step. Requires T ≥ 1.
Trajectory generate_trajectory(const Vector& x0, const PhiTildeSolution& sol,
                               const QuadraticPenalty& phi, const Vector& b, int T);

/// Spectral radius of I − C⁻¹Φ̃, the per-step contraction of the closed-form
/// dynamics in the C-norm.
double step_contraction(const PhiTildeSolution& sol, const QuadraticPenalty& phi);

}  // namespace regret
