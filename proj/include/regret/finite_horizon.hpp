#pragma once

#include <optional>
#include <vector>

#include "regret/objectives.hpp"
#include "regret/penalty.hpp"
#include "regret/regret_core.hpp"

namespace regret {

enum class InitStrategy { constant_at_x0, linear_interp_to_optimum };

struct SolveConfig {
  double tol = 1e-10;  // on max_t ‖g_t‖_∞
  int max_iters = 10'000;
  double backtrack = 0.5;
  double initial_step = 1.0;
  double armijo = 1e-4;
  /// Unset: linear_interp_to_optimum when x* is known, else constant_at_x0.
  std::optional<InitStrategy> init;
};

struct SolveResult {
  Trajectory trajectory;
  double final_gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  double regret = 0.0;
  /// True only for converged solves of a convex objective, where the
  /// critical point is the unique minimizer.
  bool certified_global = false;
  /// R_T after each accepted iteration, starting with the initial guess.
  std::vector<double> regret_history;
};

/// Minimizes R_T over x_1..x_T with x_0 fixed by steepest descent on the
/// Gâteaux gradient with Armijo backtracking. Failure to reach `tol` within
/// `max_iters` is reported via `converged = false` together with the best
/// iterate. Throws std::runtime_error on a non-finite objective value.
SolveResult solve_finite(const Vector& x0, int T, const Objective& f, const Penalty& phi,
                         const SolveConfig& cfg = {});

/// Axis-aligned search region for the dynamic-programming oracle.
struct Box {
  Vector lower;
  Vector upper;
};

struct DpGridConfig {
  /// Region on which each stage J^k is tabulated. Unset: centered on the
  /// segment [x, x*] with half-width `inflation` × its radius.
  std::optional<Box> box;
  double inflation = 2.0;
  int nodes_per_axis_1d = 65;
  int nodes_per_axis_2d = 33;
  /// Seed candidates scored before each local minimization.
  int multi_starts = 32;
};

/// Stage-wise solution of J^k(x) = min_y φ(y−x) + f(y) − f* + J^{k−1}(y),
/// J^0 = 0, for d ≤ 2 and T ≤ 50. Each stage is tabulated on a grid and
/// interpolated with tensor cubic Lagrange stencils; every inner minimum is
/// found by damped Newton descent from the best of `multi_starts` seeds.
///
/// Slow by construction; it exists to check the trajectory solver. Holds
/// references to `f` and `phi`, which must outlive it.
class DpValueOracle {
 public:
  DpValueOracle(const Objective& f, const Penalty& phi, int T, Box box,
                const DpGridConfig& cfg = {});

  int horizon() const { return T_; }
  /// J^T(x).
  double value(const Vector& x) const;
  /// J^k(x) for 0 ≤ k ≤ T.
  double stage_value(int k, const Vector& x) const;
  /// argmin_y of the stage-k problem at x, for k ≥ 1.
  Vector stage_argmin(int k, const Vector& x) const;

 private:
  double interpolate(int k, const Vector& y) const;  // tabulated J^k
  double stage_objective(int k, const Vector& x, const Vector& y) const;
  Vector minimize_stage(int k, const Vector& x) const;

  const Objective& f_;
  const Penalty& phi_;
  int T_;
  int d_;
  Box box_;
  int n_;
  double fstar_;
  DpGridConfig cfg_;
  std::vector<Vector> seeds_;
  std::vector<std::vector<double>> tables_;  // tables_[k] for k = 0..T−1
};

/// J^T(x) via DpValueOracle with the default search box.
double value_function(const Vector& x, int T, const Objective& f, const Penalty& phi,
                      const DpGridConfig& cfg = {});

struct ProbeRow {
  int T_low;
  int T_high;
  double max_first_k_diff;
  bool converged;  // both solves
};

/// For consecutive horizons, max_{t≤k} ‖x_t^{(T_i)} − x_t^{(T_{i+1})}‖.
/// Horizons must be strictly increasing and ≥ k.
std::vector<ProbeRow> time_consistency_probe(const Vector& x0, const std::vector<int>& horizons,
                                             int k, const Objective& f, const Penalty& phi,
                                             const SolveConfig& cfg = {});

}  // namespace regret
