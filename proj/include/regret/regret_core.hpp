#pragma once

#include <vector>

#include "regret/objectives.hpp"
#include "regret/penalty.hpp"
#include "regret/types.hpp"

namespace regret {

/// Points x_0..x_T of an algorithm that terminates at iteration T. Steps
/// beyond T are taken to be zero.
class Trajectory {
 public:
  Trajectory() = default;
  /// Throws std::invalid_argument if empty or if dimensions differ.
  explicit Trajectory(std::vector<Vector> points);

  /// T + 1 copies of x.
  static Trajectory constant(const Vector& x, int horizon);

  int dim() const { return points_.empty() ? 0 : static_cast<int>(points_[0].size()); }
  int horizon() const { return static_cast<int>(points_.size()) - 1; }
  const Vector& operator[](int t) const { return points_[static_cast<std::size_t>(t)]; }
  const std::vector<Vector>& points() const { return points_; }
  /// Δx_t = x_{t+1} − x_t; zero for t ≥ T.
  Vector increment(int t) const;

 private:
  std::vector<Vector> points_;
};

struct StepTerms {
  double suboptimality;  // f(x_t) − f*
  double penalty;        // φ(Δx_{t−1})
};

struct RegretReport {
  double total = 0.0;
  /// Entry t−1 holds the terms at t = 1..T.
  std::vector<StepTerms> per_step;
  int horizon = 0;
};

/// R_T(x) = Σ_{t=1}^{T} f(x_t) − f* + φ(Δx_{t−1}).
/// Throws std::invalid_argument when f* is unknown or dimensions differ.
RegretReport regret(const Trajectory& traj, const Objective& f, const Penalty& phi);

/// Gradient of R_T with respect to the free points x_1..x_T:
///   g_t = ∇φ(Δx_{t−1}) − ∇φ(Δx_t) + ∇f(x_t),   t < T
///   g_T = ∇φ(Δx_{T−1}) + ∇f(x_T).
/// Entry t−1 holds g_t. Requires T ≥ 1.
std::vector<Vector> gateaux_gradient(const Trajectory& traj, const Objective& f,
                                     const Penalty& phi);

/// r_t = ‖∇φ(Δx_t) − ∇φ(Δx_{t−1}) − ∇f(x_t)‖ for t = 1..T−1 (entry t−1).
/// Requires T ≥ 2.
std::vector<double> dynamics_residual(const Trajectory& traj, const Objective& f,
                                      const Penalty& phi);

/// Σ_t ‖g_t‖², the squared 2-dual norm of the Gâteaux derivative.
double gateaux_dual_norm_sq(const Trajectory& traj, const Objective& f,
                            const Penalty& phi);

}  // namespace regret
