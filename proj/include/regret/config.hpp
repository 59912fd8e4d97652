#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "regret/meta_optimizer.hpp"
#include "regret/types.hpp"

namespace regret {

enum class Experiment {
  rosenbrock2d,
  quadratic_hd,
  quadratic_closed_form_study,
  time_consistency,
  rate_bounds,
};

std::string to_string(Experiment e);

/// Raised for malformed or invalid configuration. `field()` is the offending
/// key, and what() starts with it.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Fully resolved experiment settings: every field holds a value after
/// parse_config, with per-experiment defaults filled in.
struct ExperimentConfig {
  Experiment experiment = Experiment::quadratic_closed_form_study;
  std::uint64_t seed = 0;
  double gamma = 0.1;
  int T = 100;
  int dim = 1;
  MetaParams theta0{1.0, 0.5};
  int inner_steps = 10;
  double inner_lr = 1e-4;
  ThetaGradMode theta_grad_mode = ThetaGradMode::analytic;
  std::string output_dir;
  Vector x0;
  /// Quadratic instance f = ½(x−b)ᵀA(x−b), φ = ½zᵀCz (closed-form, rate and
  /// consistency experiments).
  Matrix A;
  Matrix C;
  Vector b;
  std::vector<int> horizons{10, 20, 40, 80};
  int k = 5;
  std::optional<double> nesterov_momentum;
  bool write_trajectories = true;

  MetaConfig meta_config() const;
};

/// Parses `key = value` lines; '#' starts a comment, blank lines are ignored.
/// Vectors are comma separated, matrix rows are separated by ';'. Unknown or
/// repeated keys are errors. Throws ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_string(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Checks value ranges and shapes; parse_config calls it.
void validate(const ExperimentConfig& cfg);

/// Help text listing every key, its meaning and its default.
std::string config_keys_help();

}  // namespace regret
