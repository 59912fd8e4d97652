#include "regret/regret_core.hpp"

#include <stdexcept>
#include <utility>

namespace regret {

Trajectory::Trajectory(std::vector<Vector> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("trajectory needs at least x_0");
  const auto d = points_.front().size();
  if (d == 0) throw std::invalid_argument("trajectory points must be non-empty");
  for (const auto& p : points_) {
    if (p.size() != d) throw std::invalid_argument("trajectory points differ in dimension");
  }
}

Trajectory Trajectory::constant(const Vector& x, int horizon) {
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  return Trajectory(std::vector<Vector>(static_cast<std::size_t>(horizon) + 1, x));
}

Vector Trajectory::increment(int t) const {
  if (t < 0) throw std::out_of_range("increment index must be >= 0");
  if (t >= horizon()) return Vector::Zero(dim());
  return (*this)[t + 1] - (*this)[t];
}

namespace {

void check_dims(const Trajectory& traj, const Objective& f, const Penalty& phi) {
  if (traj.dim() != f.dim() || traj.dim() != phi.dim()) {
    throw std::invalid_argument("trajectory, objective and penalty dimensions differ");
  }
}

}  // namespace

RegretReport regret(const Trajectory& traj, const Objective& f, const Penalty& phi) {
  check_dims(traj, f, phi);
  const auto fstar = f.optimal_value();
  if (!fstar) throw std::invalid_argument("regret requires a known optimal value f*");
  RegretReport report;
  report.horizon = traj.horizon();
  report.per_step.reserve(static_cast<std::size_t>(traj.horizon()));
  for (int t = 1; t <= traj.horizon(); ++t) {
    StepTerms terms{f.value(traj[t]) - *fstar, phi.phi(traj.increment(t - 1))};
    report.total += terms.suboptimality + terms.penalty;
    report.per_step.push_back(terms);
  }
  return report;
}

std::vector<Vector> gateaux_gradient(const Trajectory& traj, const Objective& f,
                                     const Penalty& phi) {
  check_dims(traj, f, phi);
  const int T = traj.horizon();
  if (T < 1) throw std::invalid_argument("gateaux_gradient requires T >= 1");
  std::vector<Vector> g;
  g.reserve(static_cast<std::size_t>(T));
  Vector momentum_prev = phi.phi_grad(traj.increment(0));
  for (int t = 1; t <= T; ++t) {
    Vector momentum = t < T ? phi.phi_grad(traj.increment(t)) : Vector::Zero(traj.dim());
    g.push_back(momentum_prev - momentum + f.gradient(traj[t]));
    momentum_prev = std::move(momentum);
  }
  return g;
}

std::vector<double> dynamics_residual(const Trajectory& traj, const Objective& f,
                                      const Penalty& phi) {
  check_dims(traj, f, phi);
  const int T = traj.horizon();
  if (T < 2) throw std::invalid_argument("dynamics_residual requires T >= 2");
  std::vector<double> r;
  r.reserve(static_cast<std::size_t>(T - 1));
  Vector momentum_prev = phi.phi_grad(traj.increment(0));
  for (int t = 1; t < T; ++t) {
    Vector momentum = phi.phi_grad(traj.increment(t));
    r.push_back((momentum - momentum_prev - f.gradient(traj[t])).norm());
    momentum_prev = std::move(momentum);
  }
  return r;
}

double gateaux_dual_norm_sq(const Trajectory& traj, const Objective& f,
                            const Penalty& phi) {
  double total = 0.0;
  for (const auto& g : gateaux_gradient(traj, f, phi)) total += g.squaredNorm();
  return total;
}

}  // namespace regret
