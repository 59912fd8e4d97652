#pragma once

#include <string>
#include <utility>
#include <vector>

#include "regret/baselines.hpp"
#include "regret/config.hpp"
#include "regret/finite_horizon.hpp"
#include "regret/meta_optimizer.hpp"
#include "regret/quadratic_closed_form.hpp"
#include "regret/rates.hpp"

namespace regret {

struct ExperimentResult {
  std::vector<std::string> files;  // paths written, in write order
  bool diverged = false;
  std::vector<std::string> diagnostics;
  std::vector<std::pair<std::string, double>> summary;
};

/// Meta-optimizer against GD and Nesterov with one shared γ.
struct Comparison {
  MetaRun meta;
  /// f(x_t) per algorithm; shorter than T+1 if the run stopped early.
  std::vector<double> meta_f, gd_f, nesterov_f;
  std::optional<BaselineRun> gd, nesterov;
  bool diverged = false;
  std::vector<std::string> diagnostics;
};

/// A run counts as diverged when it produces a non-finite value or when
/// f − f* exceeds 10 times its initial gap.
Comparison run_comparison(const Objective& f, const Vector& x0, const ExperimentConfig& cfg);

struct RateStudy {
  PhiTildeSolution solution;
  RelativeConstants constants;
  double contraction;
  Trajectory trajectory;  // closed-form iterates x_0..x_T
  std::vector<BoundReport> reports;
  std::vector<double> value_series;  // J^∞(x_t)
  std::vector<double> potential;     // a_t
  RateFit value_fit;
};

RateStudy rate_study(const ExperimentConfig& cfg);

/// The objective selected by a config: rescaled Rosenbrock, the seeded random
/// quadratic or the configured (A, b).
ObjectivePtr make_objective(const ExperimentConfig& cfg);

/// Runs cfg.experiment and writes its CSV and SVG artifacts to
/// cfg.output_dir. Output is a deterministic function of the config.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Bound study on the configured quadratic (any quadratic experiment).
ExperimentResult run_rates(const ExperimentConfig& cfg);

/// Growing-horizon probe on the configured quadratic.
ExperimentResult run_consistency(const ExperimentConfig& cfg);

}  // namespace regret
