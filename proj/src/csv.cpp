#include "regret/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace regret::csv {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory(std::ostream& os, const Trajectory& traj, const Objective& f,
                      const Penalty& phi) {
  const int T = traj.horizon();
  const int d = traj.dim();
  os << "t";
  for (int i = 0; i < d; ++i) os << ",x_" << i;
  os << ",f_value,step_penalty,cumulative_regret,residual\n";

  const auto fstar = f.optimal_value();
  const std::vector<double> residual =
      T >= 2 ? dynamics_residual(traj, f, phi) : std::vector<double>{};
  double cumulative = 0.0;
  for (int t = 0; t <= T; ++t) {
    const double fx = f.value(traj[t]);
    const double pen = t == 0 ? 0.0 : phi.phi(traj.increment(t - 1));
    if (t > 0 && fstar) cumulative += fx - *fstar + pen;
    os << t;
    for (int i = 0; i < d; ++i) os << ',' << format_double(traj[t][i]);
    os << ',' << format_double(fx) << ',' << format_double(pen) << ',';
    if (fstar) os << format_double(cumulative);
    os << ',';
    if (t >= 1 && t < T && !residual.empty()) {
      os << format_double(residual[static_cast<std::size_t>(t - 1)]);
    }
    os << '\n';
  }
}

void write_probe(std::ostream& os, const std::vector<ProbeRow>& rows) {
  os << "T_low,T_high,max_first_k_diff\n";
  for (const auto& r : rows) {
    os << r.T_low << ',' << r.T_high << ',' << format_double(r.max_first_k_diff) << '\n';
  }
}

void write_matrix(std::ostream& os, const Matrix& M) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) os << ',';
      os << format_double(M(i, j));
    }
    os << '\n';
  }
}

void write_meta_history(std::ostream& os, const MetaRun& run) {
  os << "t,f_value,alpha,beta,frozen_loss,grad_eval_count\n";
  for (std::size_t t = 0; t < run.f_values.size(); ++t) {
    os << t << ',' << format_double(run.f_values[t]) << ','
       << format_double(run.theta[t].alpha) << ',' << format_double(run.theta[t].beta) << ',';
    if (t > 0) os << format_double(run.loss[t - 1]);
    os << ',' << run.grad_evals[t] << '\n';
  }
}

void write_bounds(std::ostream& os, const std::vector<BoundReport>& reports) {
  os << "bound_name,satisfied_from,margin\n";
  for (const auto& r : reports) {
    os << to_string(r.bound_name) << ',';
    if (r.satisfied_from) os << *r.satisfied_from;
    os << ',' << format_double(r.margin) << '\n';
  }
}

void write_columns(std::ostream& os, const std::vector<std::string>& names,
                   const std::vector<std::vector<double>>& columns) {
  os << "t";
  for (const auto& n : names) os << ',' << n;
  os << '\n';
  std::size_t rows = 0;
  for (const auto& c : columns) rows = std::max(rows, c.size());
  for (std::size_t t = 0; t < rows; ++t) {
    os << t;
    for (const auto& c : columns) {
      os << ',';
      if (t < c.size()) os << format_double(c[t]);
    }
    os << '\n';
  }
}

}  // namespace regret::csv
