#include "regret/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace regret {

namespace {

struct LineFit {
  double slope;
  double intercept;
  double r_squared;
};

LineFit least_squares(const std::vector<double>& u, const std::vector<double>& v) {
  const double n = static_cast<double>(u.size());
  double mu = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) { mu += u[i]; mv += v[i]; }
  mu /= n;
  mv /= n;
  double suu = 0.0, suv = 0.0, svv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suv += (u[i] - mu) * (v[i] - mv);
    svv += (v[i] - mv) * (v[i] - mv);
  }
  const double slope = suv / suu;
  double r2 = svv > 0.0 ? (suv * suv) / (suu * svv) : 1.0;
  r2 = std::clamp(r2, 0.0, 1.0);
  return {slope, mv - slope * mu, r2};
}

double bregman(double g_x, double g_y, const Vector& grad_y, const Vector& x, const Vector& y) {
  return g_x - g_y - grad_y.dot(x - y);
}

}  // namespace

RateFit fit_rate(const std::vector<double>& series, Window window) {
  if (window.start < 0 || window.end >= static_cast<int>(series.size()) ||
      window.end - window.start < 1) {
    throw std::invalid_argument("fit_rate: window outside series or shorter than two points");
  }
  std::vector<double> t, logt, logv;
  for (int i = window.start; i <= window.end; ++i) {
    const double v = series[static_cast<std::size_t>(i)];
    if (!(v > 0.0)) throw std::invalid_argument("fit_rate: non-positive entry in window");
    t.push_back(i);
    logt.push_back(std::log(static_cast<double>(i)));
    logv.push_back(std::log(v));
  }
  RateFit fit{};
  fit.window = window;
  if (window.start >= 1) {
    const auto p = least_squares(logt, logv);
    fit.exponent = p.slope;
    fit.power_r_squared = p.r_squared;
  } else {
    fit.exponent = std::numeric_limits<double>::quiet_NaN();
    fit.power_r_squared = 0.0;
  }
  const auto g = least_squares(t, logv);
  fit.contraction = std::exp(g.slope);
  fit.geometric_r_squared = g.r_squared;
  return fit;
}

QuadraticValueOracle::QuadraticValueOracle(PhiTildeSolution sol, Vector b)
    : sol_(std::move(sol)), b_(std::move(b)) {
  if (!sol_.converged) throw std::invalid_argument("QuadraticValueOracle: unconverged Φ̃");
}

double QuadraticValueOracle::value(const Vector& x) const { return quadratic_value(x, sol_, b_); }

Vector QuadraticValueOracle::gradient(const Vector& x) const { return sol_.phi_tilde * (x - b_); }

FunctionValueOracle::FunctionValueOracle(std::function<double(const Vector&)> value,
                                         std::function<Vector(const Vector&)> gradient)
    : value_(std::move(value)), gradient_(std::move(gradient)) {}

std::string to_string(BoundName name) {
  switch (name) {
    case BoundName::thm12: return "thm12";
    case BoundName::thm13_smooth: return "thm13_smooth";
    case BoundName::thm13_strong: return "thm13_strong";
    case BoundName::thm14_t2: return "thm14_t2";
    case BoundName::thm14_exp: return "thm14_exp";
    case BoundName::cor3: return "cor3";
  }
  return "unknown";
}

BoundReport scan_bound(BoundName name, int first_t, std::vector<double> values,
                       std::vector<double> bounds, double slack) {
  if (values.size() != bounds.size()) throw std::invalid_argument("scan_bound: size mismatch");
  BoundReport r;
  r.bound_name = name;
  r.first_t = first_t;
  r.last_t = first_t + static_cast<int>(values.size()) - 1;
  // Walk backwards to find the start of the trailing run where the bound holds.
  std::size_t start = values.size();
  while (start > 0 && values[start - 1] <= bounds[start - 1] + slack) --start;
  if (start < values.size()) r.satisfied_from = first_t + static_cast<int>(start);
  const std::size_t from = r.satisfied_from ? start : 0;
  r.margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = from; i < values.size(); ++i) {
    r.margin = std::min(r.margin, bounds[i] - values[i]);
  }
  if (values.empty()) r.satisfied_from = first_t;
  r.values = std::move(values);
  r.bounds = std::move(bounds);
  return r;
}

BoundReport check_thm12(const Trajectory& traj, const ValueOracle& J, const Penalty& phi) {
  const double J0 = J.value(traj[0]);
  std::vector<double> values, bounds;
  for (int t = 1; t <= traj.horizon(); ++t) {
    values.push_back(phi.reflected_conj(J.gradient(traj[t])));
    bounds.push_back(J0 / t);
  }
  return scan_bound(BoundName::thm12, 1, std::move(values), std::move(bounds));
}

std::vector<BoundReport> check_thm13(const Trajectory& traj, const ValueOracle& J,
                                     const Penalty& phi, const Vector& x_star, double lambda,
                                     std::optional<double> mu) {
  if (!(lambda > 0.0)) throw std::invalid_argument("check_thm13: lambda must be > 0");
  const double phi0 = phi.phi(traj[0] - x_star);
  std::vector<double> values, smooth, strong;
  const double q = mu ? 1.0 - 2.0 * *mu / (1.0 + *mu) : 0.0;
  for (int t = 1; t <= traj.horizon(); ++t) {
    values.push_back(J.value(traj[t]));
    smooth.push_back(lambda * phi0 / t);
    if (mu) strong.push_back(lambda * std::pow(q, t) * phi0);
  }
  std::vector<BoundReport> out;
  out.push_back(scan_bound(BoundName::thm13_smooth, 1, values, std::move(smooth)));
  if (mu) out.push_back(scan_bound(BoundName::thm13_strong, 1, values, std::move(strong)));
  return out;
}

std::vector<double> step_potential(const Trajectory& traj, const Objective& f, const Penalty& phi) {
  const double fstar = f.optimal_value().value_or(0.0);
  std::vector<double> a;
  for (int t = 0; t < traj.horizon(); ++t) {
    a.push_back(f.value(traj[t]) - fstar + phi.phi(traj.increment(t)));
  }
  return a;
}

std::vector<double> lagrangian_sequence(const Trajectory& traj, const Objective& f,
                                        const Penalty& phi) {
  const double fstar = f.optimal_value().value_or(0.0);
  std::vector<double> L;
  for (int t = 0; t < traj.horizon(); ++t) {
    L.push_back(f.value(traj[t + 1]) - fstar + phi.phi(traj.increment(t)));
  }
  return L;
}

std::vector<BoundReport> check_thm14(const Trajectory& traj, const Objective& f,
                                     const Penalty& phi, double lambda,
                                     std::optional<double> mu) {
  if (!(lambda > 0.0)) throw std::invalid_argument("check_thm14: lambda must be > 0");
  const auto x_star = f.optimum();
  if (!x_star) throw std::invalid_argument("check_thm14: objective optimum unknown");
  const double phi0 = phi.phi(traj[0] - *x_star);
  const auto a = step_potential(traj, f, phi);
  const double q = mu ? 1.0 - 2.0 * *mu / (1.0 + *mu) : 0.0;

  std::vector<double> values, t2, expo;
  for (std::size_t t = 1; t < a.size(); ++t) {
    const double td = static_cast<double>(t);
    values.push_back(a[t]);
    t2.push_back(2.0 * lambda * phi0 / (td * td));
    if (mu) expo.push_back(lambda * phi0 * std::pow(q, td + 1.0));
  }
  std::vector<double> scaled, scaled_prev;
  for (std::size_t t = 2; t < a.size(); ++t) {
    scaled.push_back(static_cast<double>(t) * a[t]);
    scaled_prev.push_back(static_cast<double>(t - 1) * a[t - 1]);
  }
  std::vector<BoundReport> out;
  out.push_back(scan_bound(BoundName::thm14_t2, 1, values, std::move(t2)));
  if (mu) out.push_back(scan_bound(BoundName::thm14_exp, 1, values, std::move(expo)));
  out.push_back(scan_bound(BoundName::cor3, 2, std::move(scaled), std::move(scaled_prev)));
  return out;
}

std::vector<double> dual_descent_slack(const Trajectory& traj, const ValueOracle& J,
                                       const Penalty& phi) {
  std::vector<double> slack;
  for (int t = 0; t < traj.horizon(); ++t) {
    const Vector gt = J.gradient(traj[t]);
    const Vector gn = J.gradient(traj[t + 1]);
    const double d = bregman(J.value(traj[t + 1]), J.value(traj[t]), gt, traj[t + 1], traj[t]);
    slack.push_back(phi.reflected_conj(gt) - (phi.reflected_conj(gn) + d));
  }
  return slack;
}

std::vector<double> primal_descent_slack(const Trajectory& traj, const ValueOracle& J,
                                         const Penalty& phi) {
  std::vector<double> slack;
  for (int t = 0; t < traj.horizon(); ++t) {
    const Vector& x = traj[t];
    const Vector& y = traj[t + 1];
    // D_φ(x_t, x_{t+1})
    const double d = bregman(phi.phi(x), phi.phi(y), phi.phi_grad(y), x, y);
    slack.push_back(-d - (J.value(y) - J.value(x)));
  }
  return slack;
}

}  // namespace regret
