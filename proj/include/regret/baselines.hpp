#pragma once

#include <optional>

#include "regret/objectives.hpp"
#include "regret/regret_core.hpp"

namespace regret {

struct BaselineConfig {
  double gamma = 0.1;
  int T = 100;
  /// Unset: classic convex schedule μ_t = t/(t+3). Set: constant μ.
  std::optional<double> fixed_momentum;

  void validate() const;
};

struct BaselineRun {
  Trajectory trajectory;
  long grad_evals = 0;
};

/// x_{t+1} = x_t − γ∇f(x_t).
BaselineRun gd_run(const Vector& x0, const Objective& f, const BaselineConfig& cfg);

/// y_t = x_t + μ_t(x_t − x_{t−1}), x_{t+1} = y_t − γ∇f(y_t), x_{−1} = x_0.
BaselineRun nesterov_run(const Vector& x0, const Objective& f, const BaselineConfig& cfg);

}  // namespace regret
