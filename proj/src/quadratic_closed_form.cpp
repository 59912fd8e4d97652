#include "regret/quadratic_closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace regret {

double psi(double x) {
  if (!(x >= 0.0)) throw std::domain_error("psi: argument must be non-negative");
  if (std::isinf(x)) return 1.0;
  // ½(√(x²+4x) − x) rewritten as 2x / (√(x²+4x) + x) to avoid cancellation
  // for large x.
  if (x == 0.0) return 0.0;
  return 2.0 * x / (std::sqrt(x * x + 4.0 * x) + x);
}

namespace {

Matrix spd_inverse(const Matrix& M, const char* what) {
  Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(std::string("solve_phi_tilde: ") + what + " is not positive-definite");
  }
  return llt.solve(Matrix::Identity(M.rows(), M.cols()));
}

void require_converged(const PhiTildeSolution& sol) {
  if (!sol.converged) throw std::invalid_argument("closed-form dynamics need a converged Φ̃");
}

}  // namespace

double phi_tilde_residual(const Matrix& A, const Matrix& C, const Matrix& phi_tilde) {
  const Matrix lhs = spd_inverse(phi_tilde, "Φ̃");
  const Matrix rhs = spd_inverse(C, "C") + spd_inverse(A + phi_tilde, "A + Φ̃");
  return (lhs - rhs).norm();
}

PhiTildeSolution solve_phi_tilde(const Matrix& A, const Matrix& C, double tol,
                                 int max_iters) {
  require_spd(A, "A", 1e-10);
  require_spd(C, "C", 1e-10);
  if (A.rows() != C.rows()) throw std::invalid_argument("solve_phi_tilde: A and C differ in size");
  if (!(tol > 0.0) || max_iters < 1) throw std::invalid_argument("solve_phi_tilde: bad tolerance");

  const Matrix C_inv = spd_inverse(C, "C");
  PhiTildeSolution sol;
  sol.phi_tilde = C;
  for (;;) {
    const Matrix shifted_inv = spd_inverse(A + sol.phi_tilde, "A + Φ̃");
    const Matrix target = C_inv + shifted_inv;
    sol.residual = (spd_inverse(sol.phi_tilde, "Φ̃") - target).norm();
    if (!std::isfinite(sol.residual)) throw std::runtime_error("solve_phi_tilde: non-finite residual");
    if (sol.residual <= tol) {
      sol.converged = true;
      break;
    }
    if (sol.iterations >= max_iters) break;
    Matrix next = spd_inverse(target, "C⁻¹ + (A + Φ̃)⁻¹");
    sol.phi_tilde = 0.5 * (next + next.transpose());
    ++sol.iterations;
  }
  return sol;
}

Matrix phi_tilde_spectral(const Matrix& A, const Matrix& C) {
  require_spd(A, "A", 1e-10);
  require_spd(C, "C", 1e-10);
  Eigen::LLT<Matrix> llt(C);
  const Matrix L = llt.matrixL();
  // W = L⁻¹ A L⁻ᵀ
  Matrix W = llt.matrixL().solve(A);
  W = llt.matrixL().solve(Matrix(W.transpose()));
  W = 0.5 * (W + W.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(W);
  Vector modes = eig.eigenvalues();
  for (Eigen::Index i = 0; i < modes.size(); ++i) modes[i] = psi(std::max(modes[i], 0.0));
  const Matrix LQ = L * eig.eigenvectors();
  Matrix out = LQ * modes.asDiagonal() * LQ.transpose();
  return 0.5 * (out + out.transpose());
}

RelativeConstants relative_constants(const Matrix& phi_tilde, const Matrix& C) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> eig(phi_tilde, C, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw std::runtime_error("relative_constants: eigensolve failed");
  return {eig.eigenvalues().maxCoeff(), eig.eigenvalues().minCoeff()};
}

Vector optimal_step(const Vector& x, const PhiTildeSolution& sol,
                    const QuadraticPenalty& phi, const Vector& b) {
  require_converged(sol);
  if (x.size() != b.size() || x.size() != sol.phi_tilde.rows()) {
    throw std::invalid_argument("optimal_step: dimension mismatch");
  }
  return x - phi.phi_conj_grad(sol.phi_tilde * (x - b));
}

double quadratic_value(const Vector& x, const PhiTildeSolution& sol, const Vector& b) {
  require_converged(sol);
  const Vector e = x - b;
  return 0.5 * e.dot(sol.phi_tilde * e);
}

Trajectory generate_trajectory(const Vector& x0, const PhiTildeSolution& sol,
                               const QuadraticPenalty& phi, const Vector& b, int T) {
  require_converged(sol);
  if (T < 1) throw std::invalid_argument("generate_trajectory: T must be >= 1");
  std::vector<Vector> points;
  points.reserve(static_cast<std::size_t>(T) + 1);
  points.push_back(x0);
  for (int t = 0; t < T; ++t) points.push_back(optimal_step(points.back(), sol, phi, b));
  return Trajectory(std::move(points));
}

double step_contraction(const PhiTildeSolution& sol, const QuadraticPenalty& phi) {
  const auto rc = relative_constants(sol.phi_tilde, phi.C());
  return std::max(std::abs(1.0 - rc.lambda), std::abs(1.0 - rc.mu));
}

}  // namespace regret
