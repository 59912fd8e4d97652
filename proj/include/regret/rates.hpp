#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "regret/objectives.hpp"
#include "regret/penalty.hpp"
#include "regret/quadratic_closed_form.hpp"
#include "regret/regret_core.hpp"

namespace regret {

struct Window {
  int start;  // inclusive
  int end;    // inclusive
};

struct RateFit {
  /// Slope of log(series) against log(t).
  double exponent;
  double power_r_squared;
  /// exp(slope) of log(series) against t.
  double contraction;
  double geometric_r_squared;
  Window window;
};

/// Least-squares power and geometric fits of series[t] over the window.
/// The power fit needs window.start ≥ 1. Throws std::invalid_argument on
/// non-positive entries or a window outside the series.
RateFit fit_rate(const std::vector<double>& series, Window window);

/// Access to J^∞ and ∇J^∞.
class ValueOracle {
 public:
  virtual ~ValueOracle() = default;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
};

/// J^∞(x) = ½(x−b)ᵀΦ̃(x−b).
class QuadraticValueOracle final : public ValueOracle {
 public:
  QuadraticValueOracle(PhiTildeSolution sol, Vector b);
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;

 private:
  PhiTildeSolution sol_;
  Vector b_;
};

/// Value and gradient supplied as closures (e.g. a DP oracle with
/// finite-difference gradients).
class FunctionValueOracle final : public ValueOracle {
 public:
  FunctionValueOracle(std::function<double(const Vector&)> value,
                      std::function<Vector(const Vector&)> gradient);
  double value(const Vector& x) const override { return value_(x); }
  Vector gradient(const Vector& x) const override { return gradient_(x); }

 private:
  std::function<double(const Vector&)> value_;
  std::function<Vector(const Vector&)> gradient_;
};

enum class BoundName { thm12, thm13_smooth, thm13_strong, thm14_t2, thm14_exp, cor3 };

std::string to_string(BoundName name);

/// Absolute slack absorbed by every bound comparison.
inline constexpr double kBoundSlack = 1e-12;

struct BoundReport {
  BoundName bound_name;
  /// First t from which value_t ≤ bound_t + slack holds through the end.
  /// Unset if the bound fails at the last checked t.
  std::optional<int> satisfied_from;
  /// min over t ≥ satisfied_from of (bound_t − value_t); over all checked t
  /// when unset.
  double margin;
  /// Checked range [first_t, last_t].
  int first_t;
  int last_t;
  std::vector<double> values;
  std::vector<double> bounds;

  bool holds_throughout() const { return satisfied_from && *satisfied_from == first_t; }
};

/// Generic scan: value/bound pairs for t = first_t..first_t+values.size()−1.
BoundReport scan_bound(BoundName name, int first_t, std::vector<double> values,
                       std::vector<double> bounds, double slack = kBoundSlack);

/// φ̃*(∇J^∞(x_t)) ≤ J^∞(x_0)/t for t ≥ 1.
BoundReport check_thm12(const Trajectory& traj, const ValueOracle& J, const Penalty& phi);

/// J^∞(x_t) ≤ λφ(x_0−x*)/t and, when μ is given,
/// J^∞(x_t) ≤ λ(1 − 2μ/(1+μ))^t φ(x_0−x*), for t ≥ 1.
std::vector<BoundReport> check_thm13(const Trajectory& traj, const ValueOracle& J,
                                     const Penalty& phi, const Vector& x_star, double lambda,
                                     std::optional<double> mu = std::nullopt);

/// a_t = f(x_t) − f* + φ(Δx_t) against 2λφ(x_0−x*)/t² and, when μ is given,
/// λφ(x_0−x*)(1 − 2μ/(1+μ))^{t+1}; plus a cor3 report on the monotone decay
/// of t·a_t (value: t·a_t, bound: (t−1)·a_{t−1}) for t ≥ 1. The last point
/// of the trajectory is excluded because Δx_T is not observed.
std::vector<BoundReport> check_thm14(const Trajectory& traj, const Objective& f,
                                     const Penalty& phi, double lambda,
                                     std::optional<double> mu = std::nullopt);

/// a_t = f(x_t) − f* + φ(Δx_t) for t = 0..T−1.
std::vector<double> step_potential(const Trajectory& traj, const Objective& f, const Penalty& phi);

/// ℒ_t = f(x_{t+1}) − f* + φ(Δx_t) for t = 0..T−1.
std::vector<double> lagrangian_sequence(const Trajectory& traj, const Objective& f,
                                        const Penalty& phi);

/// Per-step slack of the dual descent inequality
/// φ̃*(∇J(x_{t+1})) + D_J(x_{t+1}, x_t) ≤ φ̃*(∇J(x_t)), as rhs − lhs.
std::vector<double> dual_descent_slack(const Trajectory& traj, const ValueOracle& J,
                                       const Penalty& phi);

/// Per-step slack of J(x_{t+1}) − J(x_t) ≤ −D_φ(x_t, x_{t+1}), as rhs − lhs.
std::vector<double> primal_descent_slack(const Trajectory& traj, const ValueOracle& J,
                                         const Penalty& phi);

}  // namespace regret
