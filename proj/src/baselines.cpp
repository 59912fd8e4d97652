#include "regret/baselines.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace regret {

void BaselineConfig::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma: must be > 0");
  if (T < 1) throw std::invalid_argument("T: must be >= 1");
  if (fixed_momentum && !(*fixed_momentum >= 0.0 && *fixed_momentum < 1.0)) {
    throw std::invalid_argument("nesterov_momentum: must lie in [0, 1)");
  }
}

namespace {

void guard(const Vector& x, const char* method, int t) {
  if (!x.allFinite()) {
    throw std::runtime_error(std::string(method) + ": non-finite iterate at step " +
                             std::to_string(t));
  }
}

}  // namespace

BaselineRun gd_run(const Vector& x0, const Objective& f, const BaselineConfig& cfg) {
  cfg.validate();
  if (x0.size() != f.dim()) throw std::invalid_argument("gd_run: dimension mismatch");
  std::vector<Vector> x{x0};
  x.reserve(static_cast<std::size_t>(cfg.T) + 1);
  for (int t = 0; t < cfg.T; ++t) {
    x.push_back(x.back() - cfg.gamma * f.gradient(x.back()));
    guard(x.back(), "gd_run", t + 1);
  }
  return {Trajectory(std::move(x)), cfg.T};
}

BaselineRun nesterov_run(const Vector& x0, const Objective& f, const BaselineConfig& cfg) {
  cfg.validate();
  if (x0.size() != f.dim()) throw std::invalid_argument("nesterov_run: dimension mismatch");
  std::vector<Vector> x{x0};
  x.reserve(static_cast<std::size_t>(cfg.T) + 1);
  Vector prev = x0;
  for (int t = 0; t < cfg.T; ++t) {
    const double mu = cfg.fixed_momentum.value_or(static_cast<double>(t) / (t + 3));
    const Vector& cur = x.back();
    const Vector y = cur + mu * (cur - prev);
    Vector next = y - cfg.gamma * f.gradient(y);
    guard(next, "nesterov_run", t + 1);
    prev = cur;
    x.push_back(std::move(next));
  }
  return {Trajectory(std::move(x)), cfg.T};
}

}  // namespace regret
