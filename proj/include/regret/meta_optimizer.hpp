#pragma once

#include <vector>

#include "regret/objectives.hpp"
#include "regret/penalty.hpp"
#include "regret/regret_core.hpp"

namespace regret {

inline constexpr double kMetaParamFloor = 1e-8;

/// θ = (α, β) of the momentum field ν̂_t = α∇f(y_{t−1}) + βν̂_{t−1}.
struct MetaParams {
  double alpha = 1.0;
  double beta = 0.5;

  /// Projection onto [1e-8, ∞)².
  MetaParams clamped() const;
};

struct MetaState {
  MetaParams params;
  Vector nu_prev;    // ν̂_{t−1}, zero before the first step
  Vector last_grad;  // most recent ∇f evaluation
  Vector x;
  int t = 0;
};

enum class ThetaGradMode { analytic, finite_difference };

struct MetaConfig {
  int inner_steps = 10;
  double inner_lr = 1e-4;
  /// φ = γ⁻¹/2 ‖·‖².
  double gamma = 0.1;
  MetaParams theta0{1.0, 0.5};
  int T = 100;
  ThetaGradMode theta_grad_mode = ThetaGradMode::analytic;
  /// Central-difference step for ThetaGradMode::finite_difference.
  double fd_step = 1e-7;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// α·last_grad + β·nu_prev.
Vector field_value(const MetaParams& theta, const Vector& nu_prev, const Vector& last_grad);
Vector field_value(const MetaState& state);

/// ŷ = x − ∇φ̃*(ν).
Vector test_point(const Vector& x, const Vector& nu, const Penalty& phi);

/// ‖ν̂(x) − ν̂(ŷ) − ∇f(ŷ)‖² with ν̂(x) = α·last_grad + β·nu_prev,
/// ŷ = x − ∇φ̃*(ν̂(x)) and ν̂(ŷ) = α∇f(ŷ) + β·ν̂(x).
double meta_loss(const MetaParams& theta, const Vector& x, const Vector& nu_prev,
                 const Vector& last_grad, const Objective& f, const Penalty& phi);

/// The frozen online loss: as meta_loss but with ∇f evaluated once at the
/// test point of θ_prev and reused for every θ.
class FrozenLoss {
 public:
  FrozenLoss(const MetaParams& theta_prev, const Vector& x, const Vector& nu_prev,
             const Vector& last_grad, const Objective& f, const Penalty& phi);

  double operator()(const MetaParams& theta) const;
  /// Exact (∂/∂α, ∂/∂β).
  MetaParams gradient(const MetaParams& theta) const;
  MetaParams gradient_fd(const MetaParams& theta, double step) const;

  const Vector& test_point() const { return y_; }
  const Vector& frozen_grad() const { return grad_y_; }

 private:
  Vector nu_prev_;
  Vector last_grad_;
  Vector y_;
  Vector grad_y_;
};

double frozen_loss(const MetaParams& theta, const MetaParams& theta_prev, const Vector& x,
                   const Vector& nu_prev, const Vector& last_grad, const Objective& f,
                   const Penalty& phi);

struct MetaRun {
  Trajectory trajectory;            // x_0..x_T
  std::vector<MetaParams> theta;    // θ_0..θ_T
  std::vector<double> loss;         // L̂_t(θ_{t+1}), t = 0..T−1
  std::vector<double> f_values;     // f(x_t), t = 0..T
  std::vector<long> grad_evals;     // cumulative ∇f calls after step t, t = 0..T
  long total_grad_evals = 0;
  bool diverged = false;
};

/// Online regret meta-optimization. Per outer step: form the test point with
/// θ_t, evaluate ∇f there once, run `inner_steps` projected gradient steps on
/// the frozen loss, then step x_{t+1} = x_t − ∇φ*(ν̂^{θ_{t+1}}(x_t)).
///
/// Uses exactly T + 1 gradient evaluations. Stops early with
/// `diverged = true` when f − f* exceeds 10× its initial value; throws
/// std::runtime_error naming the iteration if a NaN appears.
MetaRun run_meta(const Vector& x0, const Objective& f, const MetaConfig& cfg);

/// Iterates of a fixed-θ field: x_{t+1} = x_t − ∇φ̃*(ν_t),
/// ν_t = α∇f(x_t) + βν_{t−1}, ν_{−1} = 0.
struct FieldRollout {
  MetaParams theta;
  /// x_0..x_{T+1}; the trailing point closes the last loss term.
  std::vector<Vector> points;
  std::vector<Vector> nus;  // ν_0..ν_T
  int horizon() const { return static_cast<int>(points.size()) - 2; }
  Trajectory trajectory() const;  // x_0..x_T
};

FieldRollout field_rollout(const Vector& x0, const MetaParams& theta, int T,
                           const Objective& f, const Penalty& phi);

struct IdentityCheck {
  double lhs;  // Σ_{t=1}^T L(θ; x_{t−1})
  double rhs;  // Σ_{t=1}^T ‖g_t‖² of the field trajectory
  double gap;
};

/// Compares the summed meta-loss along a fixed-θ rollout with the squared
/// dual norm of the regret's Gâteaux derivative. The terminal component uses
/// the field's own next step rather than the Δx_T = 0 convention.
IdentityCheck loss_identity_check(const FieldRollout& rollout, const Objective& f,
                                  const Penalty& phi);

}  // namespace regret
