#include "regret/finite_horizon.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace regret {

namespace {

using Points = std::vector<Vector>;  // x_0..x_T

double evaluate_regret(const Points& x, const Objective& f, const Penalty& phi, double fstar) {
  double total = 0.0;
  for (std::size_t t = 1; t < x.size(); ++t) {
    total += f.value(x[t]) - fstar + phi.phi(x[t] - x[t - 1]);
  }
  if (!std::isfinite(total)) {
    throw std::runtime_error("solve_finite: non-finite regret encountered");
  }
  return total;
}

// Entry t−1 holds ∂R_T/∂x_t.
Points evaluate_gradient(const Points& x, const Objective& f, const Penalty& phi) {
  const std::size_t T = x.size() - 1;
  Points g(T);
  Vector momentum_prev = phi.phi_grad(x[1] - x[0]);
  for (std::size_t t = 1; t <= T; ++t) {
    Vector momentum = t < T ? phi.phi_grad(x[t + 1] - x[t]) : Vector::Zero(x[t].size());
    g[t - 1] = momentum_prev - momentum + f.gradient(x[t]);
    momentum_prev = std::move(momentum);
  }
  return g;
}

double max_norm(const Points& g) {
  double m = 0.0;
  for (const auto& v : g) m = std::max(m, v.cwiseAbs().maxCoeff());
  return m;
}

double squared_norm(const Points& g) {
  double s = 0.0;
  for (const auto& v : g) s += v.squaredNorm();
  return s;
}

double inner(const Points& a, const Points& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
  return s;
}

Points shifted(const Points& x, const Points& g, double step) {
  Points out = x;
  for (std::size_t t = 1; t < x.size(); ++t) out[t] -= step * g[t - 1];
  return out;
}

}  // namespace

SolveResult solve_finite(const Vector& x0, int T, const Objective& f, const Penalty& phi,
                         const SolveConfig& cfg) {
  if (T < 1) throw std::invalid_argument("solve_finite: T must be >= 1");
  if (!(cfg.tol > 0.0) || cfg.max_iters < 1) throw std::invalid_argument("solve_finite: bad config");
  if (x0.size() != f.dim() || x0.size() != phi.dim()) {
    throw std::invalid_argument("solve_finite: dimension mismatch");
  }
  const auto fstar_opt = f.optimal_value();
  const double fstar = fstar_opt.value_or(0.0);
  const auto xstar = f.optimum();

  InitStrategy init = cfg.init.value_or(xstar ? InitStrategy::linear_interp_to_optimum
                                              : InitStrategy::constant_at_x0);
  if (init == InitStrategy::linear_interp_to_optimum && !xstar) {
    throw std::invalid_argument("solve_finite: linear initialization needs a known optimum");
  }
  Points x(static_cast<std::size_t>(T) + 1, x0);
  if (init == InitStrategy::linear_interp_to_optimum) {
    for (int t = 1; t <= T; ++t) {
      x[static_cast<std::size_t>(t)] = x0 + (static_cast<double>(t) / T) * (*xstar - x0);
    }
  }

  SolveResult result;
  double R = evaluate_regret(x, f, phi, fstar);
  Points g = evaluate_gradient(x, f, phi);
  double gnorm = max_norm(g);
  result.regret_history.push_back(R);

  const double eps = std::numeric_limits<double>::epsilon();
  while (gnorm > cfg.tol && result.iterations < cfg.max_iters) {
    const double gsq = squared_norm(g);
    double step = cfg.initial_step;
    bool accepted = false;
    Points trial, trial_g;
    double trial_R = R;
    // Armijo backtracking while the predicted decrease is resolvable in
    // floating point.
    while (cfg.armijo * step * gsq > 64.0 * eps * (1.0 + std::abs(R))) {
      trial = shifted(x, g, step);
      trial_R = evaluate_regret(trial, f, phi, fstar);
      if (trial_R <= R - cfg.armijo * step * gsq) {
        accepted = true;
        trial_g = evaluate_gradient(trial, f, phi);
        break;
      }
      step *= cfg.backtrack;
    }
    if (!accepted) {
      // Below roundoff the regret values cannot rank candidates; accept the
      // longest step at which the directional derivative along −g is still
      // negative, which keeps R_T decreasing.
      step = std::min(step / cfg.backtrack, cfg.initial_step);
      for (int k = 0; k < 80 && !accepted; ++k, step *= cfg.backtrack) {
        trial = shifted(x, g, step);
        trial_g = evaluate_gradient(trial, f, phi);
        if (inner(trial_g, g) > 0.0 && max_norm(trial_g) < gnorm) {
          trial_R = evaluate_regret(trial, f, phi, fstar);
          accepted = trial_R <= R + 64.0 * eps * (1.0 + std::abs(R));
        }
      }
    }
    if (!accepted) break;
    x = std::move(trial);
    g = std::move(trial_g);
    R = std::min(trial_R, R);
    gnorm = max_norm(g);
    ++result.iterations;
    result.regret_history.push_back(R);
  }

  result.trajectory = Trajectory(std::move(x));
  result.final_gradient_norm = gnorm;
  result.converged = gnorm <= cfg.tol;
  result.regret = fstar_opt ? R : std::numeric_limits<double>::quiet_NaN();
  result.certified_global = result.converged && f.is_convex();
  return result;
}

// ---------------------------------------------------------------------------
// Dynamic-programming oracle

namespace {

// Cubic Lagrange weights for nodes i−1..i+2 at fractional offset s from i.
std::array<double, 4> cubic_weights(double s) {
  return {-s * (s - 1.0) * (s - 2.0) / 6.0, (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
          -(s + 1.0) * s * (s - 2.0) / 2.0, (s + 1.0) * s * (s - 1.0) / 6.0};
}

// Stencil base index and offset for coordinate y on an n-node grid.
std::pair<int, double> stencil(double y, double lo, double h, int n) {
  const double u = (y - lo) / h;
  int i = static_cast<int>(std::floor(u));
  i = std::clamp(i, 1, n - 3);
  return {i, u - i};
}

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  for (int i = index; i > 0; i /= base) {
    f /= base;
    r += f * (i % base);
  }
  return r;
}

}  // namespace

DpValueOracle::DpValueOracle(const Objective& f, const Penalty& phi, int T, Box box,
                             const DpGridConfig& cfg)
    : f_(f), phi_(phi), T_(T), d_(f.dim()), box_(std::move(box)), cfg_(cfg) {
  if (d_ < 1 || d_ > 2) throw std::invalid_argument("value_function: oracle supports d <= 2 only");
  if (T_ < 0 || T_ > 50) throw std::invalid_argument("value_function: oracle supports 0 <= T <= 50 only");
  if (phi_.dim() != d_ || box_.lower.size() != d_ || box_.upper.size() != d_) {
    throw std::invalid_argument("value_function: dimension mismatch");
  }
  if (((box_.upper - box_.lower).array() <= 0.0).any()) {
    throw std::invalid_argument("value_function: empty search box");
  }
  const auto fstar = f_.optimal_value();
  if (!fstar) throw std::invalid_argument("value_function: requires a known optimal value f*");
  fstar_ = *fstar;
  n_ = d_ == 1 ? cfg_.nodes_per_axis_1d : cfg_.nodes_per_axis_2d;
  if (n_ < 4) throw std::invalid_argument("value_function: need at least 4 nodes per axis");

  const Vector width = box_.upper - box_.lower;
  for (int s = 1; s <= std::max(cfg_.multi_starts, 0); ++s) {
    Vector seed(d_);
    seed[0] = box_.lower[0] + width[0] * halton(s, 2);
    if (d_ == 2) seed[1] = box_.lower[1] + width[1] * halton(s, 3);
    seeds_.push_back(std::move(seed));
  }

  const int nodes = d_ == 1 ? n_ : n_ * n_;
  const Vector h = width / (n_ - 1);
  tables_.assign(static_cast<std::size_t>(std::max(T_, 1)),
                 std::vector<double>(static_cast<std::size_t>(nodes), 0.0));
  for (int k = 1; k < T_; ++k) {
    auto& table = tables_[static_cast<std::size_t>(k)];
    for (int node = 0; node < nodes; ++node) {
      Vector x(d_);
      x[0] = box_.lower[0] + h[0] * (node % n_);
      if (d_ == 2) x[1] = box_.lower[1] + h[1] * (node / n_);
      table[static_cast<std::size_t>(node)] = stage_objective(k, x, minimize_stage(k, x));
    }
  }
}

double DpValueOracle::interpolate(int k, const Vector& y) const {
  if (k == 0) return 0.0;
  const auto& table = tables_[static_cast<std::size_t>(k)];
  const Vector h = (box_.upper - box_.lower) / (n_ - 1);
  const auto [i, s] = stencil(y[0], box_.lower[0], h[0], n_);
  const auto wx = cubic_weights(s);
  if (d_ == 1) {
    double v = 0.0;
    for (int a = 0; a < 4; ++a) v += wx[a] * table[static_cast<std::size_t>(i - 1 + a)];
    return v;
  }
  const auto [j, r] = stencil(y[1], box_.lower[1], h[1], n_);
  const auto wy = cubic_weights(r);
  double v = 0.0;
  for (int b = 0; b < 4; ++b) {
    double row = 0.0;
    const std::size_t base = static_cast<std::size_t>((j - 1 + b) * n_ + (i - 1));
    for (int a = 0; a < 4; ++a) row += wx[a] * table[base + static_cast<std::size_t>(a)];
    v += wy[b] * row;
  }
  return v;
}

double DpValueOracle::stage_objective(int k, const Vector& x, const Vector& y) const {
  return phi_.phi(y - x) + f_.value(y) - fstar_ + interpolate(k - 1, y);
}

Vector DpValueOracle::minimize_stage(int k, const Vector& x) const {
  auto obj = [&](const Vector& y) { return stage_objective(k, x, y); };

  Vector best = x;
  double best_val = obj(x);
  for (const auto& seed : seeds_) {
    const double v = obj(seed);
    if (v < best_val) { best_val = v; best = seed; }
  }

  // Damped Newton with central-difference derivatives.
  const double scale = (box_.upper - box_.lower).maxCoeff();
  const double h = 1e-4 * scale;
  Vector y = best;
  double fy = best_val;
  for (int iter = 0; iter < 60; ++iter) {
    Vector g(d_);
    Matrix H(d_, d_);
    for (int i = 0; i < d_; ++i) {
      Vector yp = y, ym = y;
      yp[i] += h;
      ym[i] -= h;
      const double fp = obj(yp), fm = obj(ym);
      g[i] = (fp - fm) / (2.0 * h);
      H(i, i) = (fp - 2.0 * fy + fm) / (h * h);
    }
    if (d_ == 2) {
      Vector y00 = y, y01 = y, y10 = y, y11 = y;
      y11[0] += h; y11[1] += h;
      y10[0] += h; y10[1] -= h;
      y01[0] -= h; y01[1] += h;
      y00[0] -= h; y00[1] -= h;
      H(0, 1) = H(1, 0) = (obj(y11) - obj(y10) - obj(y01) + obj(y00)) / (4.0 * h * h);
    }
    Vector dir;
    Eigen::LLT<Matrix> llt(H);
    if (llt.info() == Eigen::Success) {
      dir = -llt.solve(g);
    } else {
      dir = -g * (scale / std::max(g.norm(), 1e-300)) * 1e-2;
    }
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      Vector cand = y + t * dir;
      const double fc = obj(cand);
      if (fc < fy) {
        y = std::move(cand);
        fy = fc;
        moved = true;
        break;
      }
    }
    if (!moved || (t * dir).norm() <= 1e-13 * scale) break;
  }
  return y;
}

double DpValueOracle::stage_value(int k, const Vector& x) const {
  if (k < 0 || k > T_) throw std::out_of_range("stage_value: stage outside [0, T]");
  if (x.size() != d_) throw std::invalid_argument("stage_value: dimension mismatch");
  if (k == 0) return 0.0;
  return stage_objective(k, x, minimize_stage(k, x));
}

Vector DpValueOracle::stage_argmin(int k, const Vector& x) const {
  if (k < 1 || k > T_) throw std::out_of_range("stage_argmin: stage outside [1, T]");
  if (x.size() != d_) throw std::invalid_argument("stage_argmin: dimension mismatch");
  return minimize_stage(k, x);
}

double DpValueOracle::value(const Vector& x) const { return stage_value(T_, x); }

double value_function(const Vector& x, int T, const Objective& f, const Penalty& phi,
                      const DpGridConfig& cfg) {
  if (T == 0) return 0.0;
  Box box;
  if (cfg.box) {
    box = *cfg.box;
  } else {
    const auto xstar = f.optimum();
    if (!xstar) throw std::invalid_argument("value_function: needs a box or a known optimum");
    const Vector center = 0.5 * (x + *xstar);
    const double radius = std::max(0.5 * (x - *xstar).norm(), 1e-3);
    const double half = cfg.inflation * radius;
    box.lower = center.array() - half;
    box.upper = center.array() + half;
  }
  return DpValueOracle(f, phi, T, std::move(box), cfg).value(x);
}

std::vector<ProbeRow> time_consistency_probe(const Vector& x0, const std::vector<int>& horizons,
                                             int k, const Objective& f, const Penalty& phi,
                                             const SolveConfig& cfg) {
  if (k < 0) throw std::invalid_argument("time_consistency_probe: k must be >= 0");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (horizons[i] < std::max(k, 1) || (i > 0 && horizons[i] <= horizons[i - 1])) {
      throw std::invalid_argument("time_consistency_probe: horizons must increase and be >= k");
    }
  }
  std::vector<SolveResult> solves;
  solves.reserve(horizons.size());
  for (int T : horizons) solves.push_back(solve_finite(x0, T, f, phi, cfg));

  std::vector<ProbeRow> rows;
  for (std::size_t i = 0; i + 1 < solves.size(); ++i) {
    double diff = 0.0;
    for (int t = 0; t <= k; ++t) {
      diff = std::max(diff, (solves[i].trajectory[t] - solves[i + 1].trajectory[t]).norm());
    }
    rows.push_back({horizons[i], horizons[i + 1], diff,
                    solves[i].converged && solves[i + 1].converged});
  }
  return rows;
}

}  // namespace regret
