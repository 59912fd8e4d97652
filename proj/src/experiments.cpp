#include "regret/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "regret/csv.hpp"
#include "regret/svg.hpp"

namespace regret {

namespace fs = std::filesystem;

namespace {

class OutputDir {
 public:
  explicit OutputDir(const std::string& path) : dir_(path) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
      throw ConfigError("output_dir", "cannot create '" + path + "'");
    }
  }

  template <typename Writer>
  void write(ExperimentResult& result, const std::string& name, Writer&& writer) const {
    const fs::path p = dir_ / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("output_dir", "cannot write '" + p.string() + "'");
    writer(out);
    out.flush();
    if (!out) throw ConfigError("output_dir", "write failed for '" + p.string() + "'");
    result.files.push_back(p.string());
  }

  void write_text(ExperimentResult& result, const std::string& name,
                  const std::string& text) const {
    write(result, name, [&](std::ostream& os) { os << text; });
  }

 private:
  fs::path dir_;
};

std::vector<double> f_series(const Trajectory& traj, const Objective& f) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(traj.horizon()) + 1);
  for (const auto& x : traj.points()) out.push_back(f.value(x));
  return out;
}

std::vector<double> index_axis(std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i);
  return t;
}

bool series_diverged(const std::vector<double>& v, double f_ref) {
  if (v.empty()) return false;
  const double gap0 = v.front() - f_ref;
  for (double x : v) {
    if (!std::isfinite(x)) return true;
    if (gap0 > 0.0 && x - f_ref > 10.0 * gap0) return true;
  }
  return false;
}

// Largest window [start, end] of strictly positive values in the second half
// of the series, for rate fitting.
std::optional<Window> tail_window(const std::vector<double>& v) {
  if (v.size() < 4) return std::nullopt;
  int end = static_cast<int>(v.size()) - 1;
  while (end > 1 && !(v[static_cast<std::size_t>(end)] > 0.0)) --end;
  int start = std::max(1, end / 2);
  for (int i = end; i >= start; --i) {
    if (!(v[static_cast<std::size_t>(i)] > 0.0)) {
      start = i + 1;
      break;
    }
  }
  if (end - start < 1) return std::nullopt;
  return Window{start, end};
}

std::vector<double> gaps(const std::vector<double>& v, double f_ref) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) out.push_back(x - f_ref);
  return out;
}

ExperimentResult comparison_experiment(const ExperimentConfig& cfg) {
  const OutputDir out(cfg.output_dir);
  const auto f = make_objective(cfg);
  const auto phi = QuadraticPenalty::from_learning_rate(cfg.gamma, f->dim());
  const double f_ref = f->optimal_value().value_or(0.0);
  auto cmp = run_comparison(*f, cfg.x0, cfg);

  ExperimentResult result;
  result.diverged = cmp.diverged;
  result.diagnostics = cmp.diagnostics;

  if (cfg.write_trajectories) {
    if (!cmp.meta.f_values.empty()) {
      out.write(result, "meta_trajectory.csv",
                [&](std::ostream& os) { csv::write_trajectory(os, cmp.meta.trajectory, *f, phi); });
    }
    if (cmp.gd) {
      out.write(result, "gd_trajectory.csv",
                [&](std::ostream& os) { csv::write_trajectory(os, cmp.gd->trajectory, *f, phi); });
    }
    if (cmp.nesterov) {
      out.write(result, "nesterov_trajectory.csv", [&](std::ostream& os) {
        csv::write_trajectory(os, cmp.nesterov->trajectory, *f, phi);
      });
    }
  }
  out.write(result, "loss.csv", [&](std::ostream& os) {
    csv::write_columns(os, {"meta", "gd", "nesterov"}, {cmp.meta_f, cmp.gd_f, cmp.nesterov_f});
  });
  if (!cmp.meta.f_values.empty()) {
    out.write(result, "theta_history.csv",
              [&](std::ostream& os) { csv::write_meta_history(os, cmp.meta); });
  }

  const std::string label = to_string(cfg.experiment);
  std::vector<svg::Series> loss_series;
  const std::pair<const char*, const std::vector<double>*> named[] = {
      {"meta", &cmp.meta_f}, {"gd", &cmp.gd_f}, {"nesterov", &cmp.nesterov_f}};
  for (const auto& [name, values] : named) {
    loss_series.push_back({name, index_axis(values->size()), gaps(*values, f_ref)});
  }
  out.write_text(result, "loss.svg",
                 svg::line_chart(loss_series, {label + ": loss vs iteration", "t",
                                               "f(x_t) - f*", true}));

  std::vector<double> alpha, beta;
  for (const auto& th : cmp.meta.theta) {
    alpha.push_back(th.alpha);
    beta.push_back(th.beta);
  }
  out.write_text(result, "theta.svg",
                 svg::line_chart({{"alpha", index_axis(alpha.size()), alpha},
                                  {"beta", index_axis(beta.size()), beta}},
                                 {label + ": meta-parameters", "t", "value", false}));

  if (f->dim() == 2) {
    std::vector<svg::PathSeries> paths;
    if (!cmp.meta.f_values.empty()) paths.push_back({"meta", cmp.meta.trajectory});
    if (cmp.gd) paths.push_back({"gd", cmp.gd->trajectory});
    if (cmp.nesterov) paths.push_back({"nesterov", cmp.nesterov->trajectory});
    out.write_text(result, "paths.svg", svg::path_overlay(*f, paths, label + ": paths"));
  }

  auto last = [](const std::vector<double>& v) {
    return v.empty() ? std::numeric_limits<double>::quiet_NaN() : v.back();
  };
  result.summary = {{"final_f_meta", last(cmp.meta_f)},
                    {"final_f_gd", last(cmp.gd_f)},
                    {"final_f_nesterov", last(cmp.nesterov_f)},
                    {"meta_grad_evals", static_cast<double>(cmp.meta.total_grad_evals)}};
  if (!cmp.meta.theta.empty()) {
    result.summary.emplace_back("final_alpha", cmp.meta.theta.back().alpha);
    result.summary.emplace_back("final_beta", cmp.meta.theta.back().beta);
  }
  return result;
}

ExperimentResult closed_form_experiment(const ExperimentConfig& cfg) {
  const OutputDir out(cfg.output_dir);
  ExperimentResult result;
  const auto sol = solve_phi_tilde(cfg.A, cfg.C);
  result.summary = {{"phi_tilde_residual", sol.residual},
                    {"phi_tilde_iterations", static_cast<double>(sol.iterations)}};
  out.write(result, "phi_tilde.csv", [&](std::ostream& os) { csv::write_matrix(os, sol.phi_tilde); });
  if (!sol.converged) {
    result.diverged = true;
    result.diagnostics.push_back("solve_phi_tilde did not converge (residual " +
                                 csv::format_double(sol.residual) + ")");
    return result;
  }
  const Matrix spectral = phi_tilde_spectral(cfg.A, cfg.C);
  const QuadraticPenalty phi(cfg.C);
  const auto f = make_quadratic(cfg.A, cfg.b);
  const auto rc = relative_constants(sol.phi_tilde, cfg.C);
  const auto traj = generate_trajectory(cfg.x0, sol, phi, cfg.b, cfg.T);
  const auto residual = cfg.T >= 2 ? dynamics_residual(traj, *f, phi) : std::vector<double>{};

  if (cfg.write_trajectories) {
    out.write(result, "closed_form_trajectory.csv",
              [&](std::ostream& os) { csv::write_trajectory(os, traj, *f, phi); });
  }
  std::vector<double> fgap = f_series(traj, *f), J;
  for (const auto& x : traj.points()) J.push_back(quadratic_value(x, sol, cfg.b));
  out.write(result, "closed_form_values.csv",
            [&](std::ostream& os) { csv::write_columns(os, {"f_value", "value_function"}, {fgap, J}); });
  out.write_text(result, "closed_form_values.svg",
                 svg::line_chart({{"f(x_t) - f*", index_axis(fgap.size()), fgap},
                                  {"J(x_t)", index_axis(J.size()), J}},
                                 {"closed-form regret-optimal dynamics", "t", "value", true}));

  result.summary.emplace_back("spectral_max_abs_diff",
                              (sol.phi_tilde - spectral).cwiseAbs().maxCoeff());
  result.summary.emplace_back("lambda", rc.lambda);
  result.summary.emplace_back("mu", rc.mu);
  result.summary.emplace_back("step_contraction", step_contraction(sol, phi));
  result.summary.emplace_back(
      "max_dynamics_residual",
      residual.empty() ? 0.0 : *std::max_element(residual.begin(), residual.end()));
  return result;
}

}  // namespace

ObjectivePtr make_objective(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::rosenbrock2d: return make_rescaled_rosenbrock();
    case Experiment::quadratic_hd: return make_random_spd_quadratic(cfg.dim, cfg.seed);
    default: return make_quadratic(cfg.A, cfg.b);
  }
}

Comparison run_comparison(const Objective& f, const Vector& x0, const ExperimentConfig& cfg) {
  Comparison cmp;
  const double f_ref = f.optimal_value().value_or(0.0);
  try {
    cmp.meta = run_meta(x0, f, cfg.meta_config());
    cmp.meta_f = cmp.meta.f_values;
    if (cmp.meta.diverged) {
      cmp.diagnostics.push_back("meta: objective gap exceeded 10x its initial value at t=" +
                                std::to_string(cmp.meta.trajectory.horizon()));
    }
  } catch (const std::runtime_error& e) {
    cmp.meta.diverged = true;
    cmp.diagnostics.push_back(std::string("meta: ") + e.what());
  }
  bool diverged = cmp.meta.diverged;

  BaselineConfig bc;
  bc.gamma = cfg.gamma;
  bc.T = cfg.T;
  bc.fixed_momentum = cfg.nesterov_momentum;
  try {
    cmp.gd = gd_run(x0, f, bc);
    cmp.gd_f = f_series(cmp.gd->trajectory, f);
  } catch (const std::runtime_error& e) {
    diverged = true;
    cmp.diagnostics.push_back(std::string("gd: ") + e.what());
  }
  try {
    cmp.nesterov = nesterov_run(x0, f, bc);
    cmp.nesterov_f = f_series(cmp.nesterov->trajectory, f);
  } catch (const std::runtime_error& e) {
    diverged = true;
    cmp.diagnostics.push_back(std::string("nesterov: ") + e.what());
  }
  if (series_diverged(cmp.gd_f, f_ref)) {
    diverged = true;
    cmp.diagnostics.push_back("gd: objective gap exceeded 10x its initial value");
  }
  if (series_diverged(cmp.nesterov_f, f_ref)) {
    diverged = true;
    cmp.diagnostics.push_back("nesterov: objective gap exceeded 10x its initial value");
  }
  cmp.diverged = diverged;
  return cmp;
}

RateStudy rate_study(const ExperimentConfig& cfg) {
  RateStudy rs;
  rs.solution = solve_phi_tilde(cfg.A, cfg.C);
  if (!rs.solution.converged) return rs;
  const QuadraticPenalty phi(cfg.C);
  const auto f = make_quadratic(cfg.A, cfg.b);
  rs.constants = relative_constants(rs.solution.phi_tilde, cfg.C);
  rs.contraction = step_contraction(rs.solution, phi);
  rs.trajectory = generate_trajectory(cfg.x0, rs.solution, phi, cfg.b, cfg.T);
  const QuadraticValueOracle J(rs.solution, cfg.b);

  rs.reports.push_back(check_thm12(rs.trajectory, J, phi));
  for (auto& r : check_thm13(rs.trajectory, J, phi, cfg.b, rs.constants.lambda, rs.constants.mu)) {
    rs.reports.push_back(std::move(r));
  }
  for (auto& r : check_thm14(rs.trajectory, *f, phi, rs.constants.lambda, rs.constants.mu)) {
    rs.reports.push_back(std::move(r));
  }
  for (const auto& x : rs.trajectory.points()) rs.value_series.push_back(J.value(x));
  rs.potential = step_potential(rs.trajectory, *f, phi);
  if (const auto w = tail_window(rs.value_series)) rs.value_fit = fit_rate(rs.value_series, *w);
  else rs.value_fit = RateFit{std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0, 0.0, {0, 0}};
  return rs;
}

ExperimentResult run_rates(const ExperimentConfig& cfg) {
  if (cfg.A.size() == 0) {
    throw ConfigError("experiment", "rates needs a quadratic study experiment, got " +
                                        to_string(cfg.experiment));
  }
  const OutputDir out(cfg.output_dir);
  ExperimentResult result;
  const auto rs = rate_study(cfg);
  if (!rs.solution.converged) {
    result.diverged = true;
    result.diagnostics.push_back("solve_phi_tilde did not converge (residual " +
                                 csv::format_double(rs.solution.residual) + ")");
    return result;
  }
  out.write(result, "bounds.csv", [&](std::ostream& os) { csv::write_bounds(os, rs.reports); });
  out.write(result, "rate_sequences.csv", [&](std::ostream& os) {
    csv::write_columns(os, {"value_function", "step_potential"}, {rs.value_series, rs.potential});
  });

  std::vector<svg::Series> series{{"J(x_t)", index_axis(rs.value_series.size()), rs.value_series},
                                  {"a_t", index_axis(rs.potential.size()), rs.potential}};
  for (const auto& r : rs.reports) {
    if (r.bound_name == BoundName::thm13_smooth || r.bound_name == BoundName::thm13_strong ||
        r.bound_name == BoundName::thm14_t2 || r.bound_name == BoundName::thm14_exp) {
      std::vector<double> t;
      for (int i = r.first_t; i <= r.last_t; ++i) t.push_back(i);
      series.push_back({to_string(r.bound_name) + " bound", t, r.bounds});
    }
  }
  out.write_text(result, "bounds.svg",
                 svg::line_chart(series, {"rate bounds on the closed-form trajectory", "t",
                                          "value", true}));

  result.summary = {{"lambda", rs.constants.lambda},
                    {"mu", rs.constants.mu},
                    {"step_contraction", rs.contraction},
                    {"value_contraction_fit", rs.value_fit.contraction}};
  for (const auto& r : rs.reports) {
    result.summary.emplace_back(to_string(r.bound_name) + "_satisfied_from",
                                r.satisfied_from ? *r.satisfied_from : -1.0);
    result.summary.emplace_back(to_string(r.bound_name) + "_margin", r.margin);
  }
  return result;
}

ExperimentResult run_consistency(const ExperimentConfig& cfg) {
  if (cfg.A.size() == 0) {
    throw ConfigError("experiment", "consistency needs a quadratic study experiment, got " +
                                        to_string(cfg.experiment));
  }
  const OutputDir out(cfg.output_dir);
  ExperimentResult result;
  const QuadraticPenalty phi(cfg.C);
  const auto f = make_quadratic(cfg.A, cfg.b);
  const auto rows = time_consistency_probe(cfg.x0, cfg.horizons, cfg.k, *f, phi);
  out.write(result, "probe.csv", [&](std::ostream& os) { csv::write_probe(os, rows); });

  std::vector<double> th, diff;
  for (const auto& r : rows) {
    th.push_back(r.T_high);
    diff.push_back(r.max_first_k_diff);
    if (!r.converged) {
      result.diverged = true;
      result.diagnostics.push_back("solve_finite did not converge for T=" +
                                   std::to_string(r.T_low) + " or T=" + std::to_string(r.T_high));
    }
  }
  out.write_text(result, "probe.svg",
                 svg::line_chart({{"max first-k difference", th, diff}},
                                 {"time consistency", "T_high", "difference", true}));

  // Distance of the longest-horizon prefix from the infinite-horizon dynamics.
  const auto sol = solve_phi_tilde(cfg.A, cfg.C);
  if (sol.converged) {
    const int T = cfg.horizons.back();
    const auto fin = solve_finite(cfg.x0, T, *f, phi);
    const auto inf = generate_trajectory(cfg.x0, sol, phi, cfg.b, std::max(cfg.k, 1));
    double d = 0.0;
    for (int t = 0; t <= cfg.k; ++t) d = std::max(d, (fin.trajectory[t] - inf[t]).norm());
    result.summary.emplace_back("closed_form_prefix_diff", d);
  }
  for (const auto& r : rows) {
    result.summary.emplace_back("diff_" + std::to_string(r.T_low) + "_" + std::to_string(r.T_high),
                                r.max_first_k_diff);
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::rosenbrock2d:
    case Experiment::quadratic_hd:
      return comparison_experiment(cfg);
    case Experiment::quadratic_closed_form_study:
      return closed_form_experiment(cfg);
    case Experiment::time_consistency:
      return run_consistency(cfg);
    case Experiment::rate_bounds:
      return run_rates(cfg);
  }
  throw ConfigError("experiment", "unhandled experiment");
}

}  // namespace regret
