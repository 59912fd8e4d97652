#include "regret/meta_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace regret {

MetaParams MetaParams::clamped() const {
  return {std::max(alpha, kMetaParamFloor), std::max(beta, kMetaParamFloor)};
}

void MetaConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument(field + ": " + why);
  };
  if (inner_steps < 1) fail("inner_steps", "must be >= 1");
  if (!(inner_lr > 0.0)) fail("inner_lr", "must be > 0");
  if (!(gamma > 0.0)) fail("gamma", "must be > 0");
  if (!(theta0.alpha > 0.0)) fail("alpha", "must be > 0");
  if (!(theta0.beta > 0.0)) fail("beta", "must be > 0");
  if (T < 1) fail("T", "must be >= 1");
  if (!(fd_step > 0.0)) fail("fd_step", "must be > 0");
}

Vector field_value(const MetaParams& theta, const Vector& nu_prev, const Vector& last_grad) {
  if (nu_prev.size() != last_grad.size()) throw std::invalid_argument("field_value: dimension mismatch");
  return theta.alpha * last_grad + theta.beta * nu_prev;
}

Vector field_value(const MetaState& state) {
  return field_value(state.params, state.nu_prev, state.last_grad);
}

Vector test_point(const Vector& x, const Vector& nu, const Penalty& phi) {
  if (x.size() != nu.size()) throw std::invalid_argument("test_point: dimension mismatch");
  return x - phi.reflected_conj_grad(nu);
}

double meta_loss(const MetaParams& theta, const Vector& x, const Vector& nu_prev,
                 const Vector& last_grad, const Objective& f, const Penalty& phi) {
  const Vector nu = field_value(theta, nu_prev, last_grad);
  const Vector y = test_point(x, nu, phi);
  const Vector grad_y = f.gradient(y);
  const Vector nu_y = theta.alpha * grad_y + theta.beta * nu;
  return (nu - nu_y - grad_y).squaredNorm();
}

FrozenLoss::FrozenLoss(const MetaParams& theta_prev, const Vector& x, const Vector& nu_prev,
                       const Vector& last_grad, const Objective& f, const Penalty& phi)
    : nu_prev_(nu_prev),
      last_grad_(last_grad),
      y_(regret::test_point(x, field_value(theta_prev, nu_prev, last_grad), phi)),
      grad_y_(f.gradient(y_)) {}

// With g frozen, the residual is (1−β)ν̂ − (1+α)g where ν̂ = α·last_grad + β·nu_prev.
double FrozenLoss::operator()(const MetaParams& theta) const {
  const Vector nu = field_value(theta, nu_prev_, last_grad_);
  return ((1.0 - theta.beta) * nu - (1.0 + theta.alpha) * grad_y_).squaredNorm();
}

MetaParams FrozenLoss::gradient(const MetaParams& theta) const {
  const Vector nu = field_value(theta, nu_prev_, last_grad_);
  const Vector r = (1.0 - theta.beta) * nu - (1.0 + theta.alpha) * grad_y_;
  const Vector dr_dalpha = (1.0 - theta.beta) * last_grad_ - grad_y_;
  const Vector dr_dbeta = (1.0 - theta.beta) * nu_prev_ - nu;
  return {2.0 * r.dot(dr_dalpha), 2.0 * r.dot(dr_dbeta)};
}

MetaParams FrozenLoss::gradient_fd(const MetaParams& theta, double step) const {
  const auto& L = *this;
  const double da = (L({theta.alpha + step, theta.beta}) - L({theta.alpha - step, theta.beta})) /
                    (2.0 * step);
  const double db = (L({theta.alpha, theta.beta + step}) - L({theta.alpha, theta.beta - step})) /
                    (2.0 * step);
  return {da, db};
}

double frozen_loss(const MetaParams& theta, const MetaParams& theta_prev, const Vector& x,
                   const Vector& nu_prev, const Vector& last_grad, const Objective& f,
                   const Penalty& phi) {
  return FrozenLoss(theta_prev, x, nu_prev, last_grad, f, phi)(theta);
}

namespace {

bool all_finite(const Vector& v) { return v.allFinite(); }

[[noreturn]] void nan_abort(int t, const char* what) {
  throw std::runtime_error("run_meta: non-finite " + std::string(what) + " at iteration " +
                           std::to_string(t));
}

}  // namespace

MetaRun run_meta(const Vector& x0, const Objective& f, const MetaConfig& cfg) {
  cfg.validate();
  if (x0.size() != f.dim()) throw std::invalid_argument("run_meta: dimension mismatch");
  const auto phi = QuadraticPenalty::from_learning_rate(cfg.gamma, f.dim());
  const double f_ref = f.optimal_value().value_or(0.0);

  MetaRun run;
  run.theta.reserve(static_cast<std::size_t>(cfg.T) + 1);
  run.loss.reserve(static_cast<std::size_t>(cfg.T));
  std::vector<Vector> points;
  points.reserve(static_cast<std::size_t>(cfg.T) + 1);

  MetaState state;
  state.params = cfg.theta0.clamped();
  state.x = x0;
  state.nu_prev = Vector::Zero(x0.size());
  state.last_grad = f.gradient(x0);
  run.total_grad_evals = 1;
  if (!all_finite(state.last_grad)) nan_abort(0, "gradient");

  const double f0 = f.value(x0);
  const double gap0 = f0 - f_ref;
  points.push_back(x0);
  run.theta.push_back(state.params);
  run.f_values.push_back(f0);
  run.grad_evals.push_back(run.total_grad_evals);

  for (int t = 0; t < cfg.T; ++t) {
    const FrozenLoss loss(state.params, state.x, state.nu_prev, state.last_grad, f, phi);
    ++run.total_grad_evals;
    if (!all_finite(loss.frozen_grad())) nan_abort(t, "gradient");

    MetaParams theta = state.params;
    for (int k = 0; k < cfg.inner_steps; ++k) {
      const MetaParams grad = cfg.theta_grad_mode == ThetaGradMode::analytic
                                  ? loss.gradient(theta)
                                  : loss.gradient_fd(theta, cfg.fd_step);
      theta = MetaParams{theta.alpha - cfg.inner_lr * grad.alpha,
                         theta.beta - cfg.inner_lr * grad.beta}
                  .clamped();
    }
    if (!std::isfinite(theta.alpha) || !std::isfinite(theta.beta)) nan_abort(t, "theta");

    const Vector nu = field_value(theta, state.nu_prev, state.last_grad);
    state.x = state.x - phi.reflected_conj_grad(nu);
    if (!all_finite(state.x)) nan_abort(t, "iterate");
    state.nu_prev = nu;
    state.last_grad = loss.frozen_grad();
    state.params = theta;
    state.t = t + 1;

    const double fx = f.value(state.x);
    if (!std::isfinite(fx)) nan_abort(t, "objective value");
    points.push_back(state.x);
    run.theta.push_back(theta);
    run.loss.push_back(loss(theta));
    run.f_values.push_back(fx);
    run.grad_evals.push_back(run.total_grad_evals);

    if (gap0 > 0.0 && fx - f_ref > 10.0 * gap0) {
      run.diverged = true;
      break;
    }
  }
  run.trajectory = Trajectory(std::move(points));
  return run;
}

Trajectory FieldRollout::trajectory() const {
  return Trajectory(std::vector<Vector>(points.begin(), points.end() - 1));
}

FieldRollout field_rollout(const Vector& x0, const MetaParams& theta, int T,
                           const Objective& f, const Penalty& phi) {
  if (T < 1) throw std::invalid_argument("field_rollout: T must be >= 1");
  if (x0.size() != f.dim() || x0.size() != phi.dim()) {
    throw std::invalid_argument("field_rollout: dimension mismatch");
  }
  FieldRollout out;
  out.theta = theta;
  out.points.push_back(x0);
  Vector nu = Vector::Zero(x0.size());
  for (int t = 0; t <= T; ++t) {
    nu = theta.alpha * f.gradient(out.points.back()) + theta.beta * nu;
    out.nus.push_back(nu);
    out.points.push_back(out.points.back() - phi.reflected_conj_grad(nu));
  }
  return out;
}

IdentityCheck loss_identity_check(const FieldRollout& rollout, const Objective& f,
                                  const Penalty& phi) {
  const int T = rollout.horizon();
  if (T < 1) throw std::invalid_argument("loss_identity_check: empty rollout");
  IdentityCheck out{0.0, 0.0, 0.0};
  Vector nu_prev = Vector::Zero(rollout.points.front().size());
  for (int t = 0; t < T; ++t) {
    const auto& x = rollout.points[static_cast<std::size_t>(t)];
    out.lhs += meta_loss(rollout.theta, x, nu_prev, f.gradient(x), f, phi);
    nu_prev = rollout.nus[static_cast<std::size_t>(t)];
  }
  // Gâteaux components g_1..g_T on the extended path x_0..x_{T+1}: every one
  // of them is interior, so the terminal step comes from the field.
  const auto g = gateaux_gradient(Trajectory(rollout.points), f, phi);
  for (int t = 0; t < T; ++t) out.rhs += g[static_cast<std::size_t>(t)].squaredNorm();
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace regret
