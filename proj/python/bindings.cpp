#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "regret/baselines.hpp"
#include "regret/finite_horizon.hpp"
#include "regret/meta_optimizer.hpp"
#include "regret/quadratic_closed_form.hpp"
#include "regret/rates.hpp"

namespace py = pybind11;
using namespace regret;

namespace {

// Rows are x_0..x_T.
Matrix as_rows(const Trajectory& traj) {
  Matrix out(traj.horizon() + 1, traj.dim());
  for (int t = 0; t <= traj.horizon(); ++t) out.row(t) = traj[t].transpose();
  return out;
}

Trajectory from_rows(const Matrix& rows) {
  std::vector<Vector> pts;
  for (Eigen::Index t = 0; t < rows.rows(); ++t) pts.emplace_back(rows.row(t).transpose());
  return Trajectory(std::move(pts));
}

MetaConfig meta_config(double gamma, int T, double alpha, double beta, int inner_steps,
                       double inner_lr) {
  MetaConfig cfg;
  cfg.gamma = gamma;
  cfg.T = T;
  cfg.theta0 = {alpha, beta};
  cfg.inner_steps = inner_steps;
  cfg.inner_lr = inner_lr;
  return cfg;
}

BaselineConfig baseline_config(double gamma, int T, std::optional<double> momentum) {
  BaselineConfig cfg;
  cfg.gamma = gamma;
  cfg.T = T;
  cfg.fixed_momentum = momentum;
  return cfg;
}

struct PyMetaRun {
  Matrix trajectory;
  Matrix theta;  // columns alpha, beta
  std::vector<double> loss;
  std::vector<double> f_values;
  long grad_evals;
  bool diverged;
};

PyMetaRun wrap(const MetaRun& run) {
  Matrix theta(static_cast<Eigen::Index>(run.theta.size()), 2);
  for (std::size_t i = 0; i < run.theta.size(); ++i) {
    theta(static_cast<Eigen::Index>(i), 0) = run.theta[i].alpha;
    theta(static_cast<Eigen::Index>(i), 1) = run.theta[i].beta;
  }
  return {as_rows(run.trajectory), theta, run.loss, run.f_values, run.total_grad_evals,
          run.diverged};
}

}  // namespace

PYBIND11_MODULE(_regret, m) {
  m.doc() = "Regret-optimal trajectories, closed forms and the online meta-optimizer.";

  py::register_exception<std::invalid_argument>(m, "InvalidArgument", PyExc_ValueError);

  m.def("psi", &psi, py::arg("x"));

  py::class_<PhiTildeSolution>(m, "PhiTildeSolution")
      .def_readonly("phi_tilde", &PhiTildeSolution::phi_tilde)
      .def_readonly("residual", &PhiTildeSolution::residual)
      .def_readonly("iterations", &PhiTildeSolution::iterations)
      .def_readonly("converged", &PhiTildeSolution::converged);

  m.def("solve_phi_tilde", &solve_phi_tilde, py::arg("A"), py::arg("C"), py::arg("tol") = 1e-12,
        py::arg("max_iters") = 500);

  m.def(
      "closed_form_trajectory",
      [](const Matrix& A, const Matrix& C, const Vector& b, const Vector& x0, int T) {
        const auto sol = solve_phi_tilde(A, C);
        return as_rows(generate_trajectory(x0, sol, QuadraticPenalty(C), b, T));
      },
      py::arg("A"), py::arg("C"), py::arg("b"), py::arg("x0"), py::arg("T"));

  m.def(
      "quadratic_regret",
      [](const Matrix& A, const Vector& b, const Matrix& C, const Matrix& rows) {
        return regret::regret(from_rows(rows), *make_quadratic(A, b), QuadraticPenalty(C)).total;
      },
      py::arg("A"), py::arg("b"), py::arg("C"), py::arg("trajectory"));

  py::class_<SolveResult>(m, "SolveResult")
      .def_property_readonly("trajectory", [](const SolveResult& r) { return as_rows(r.trajectory); })
      .def_readonly("regret", &SolveResult::regret)
      .def_readonly("converged", &SolveResult::converged)
      .def_readonly("iterations", &SolveResult::iterations)
      .def_readonly("final_gradient_norm", &SolveResult::final_gradient_norm);

  m.def(
      "solve_finite_quadratic",
      [](const Matrix& A, const Vector& b, const Matrix& C, const Vector& x0, int T) {
        return solve_finite(x0, T, *make_quadratic(A, b), QuadraticPenalty(C));
      },
      py::arg("A"), py::arg("b"), py::arg("C"), py::arg("x0"), py::arg("T"));

  m.def(
      "rosenbrock", [](const Vector& x) { return make_rescaled_rosenbrock()->value(x); },
      py::arg("x"));
  m.def(
      "rosenbrock_gradient",
      [](const Vector& x) { return make_rescaled_rosenbrock()->gradient(x); }, py::arg("x"));

  py::class_<PyMetaRun>(m, "MetaRun")
      .def_readonly("trajectory", &PyMetaRun::trajectory)
      .def_readonly("theta", &PyMetaRun::theta)
      .def_readonly("loss", &PyMetaRun::loss)
      .def_readonly("f_values", &PyMetaRun::f_values)
      .def_readonly("grad_evals", &PyMetaRun::grad_evals)
      .def_readonly("diverged", &PyMetaRun::diverged);

  m.def(
      "run_meta_quadratic",
      [](const Matrix& A, const Vector& b, const Vector& x0, double gamma, int T, double alpha,
         double beta, int inner_steps, double inner_lr) {
        return wrap(run_meta(x0, *make_quadratic(A, b),
                             meta_config(gamma, T, alpha, beta, inner_steps, inner_lr)));
      },
      py::arg("A"), py::arg("b"), py::arg("x0"), py::arg("gamma"), py::arg("T"),
      py::arg("alpha") = 1.0, py::arg("beta") = 0.5, py::arg("inner_steps") = 10,
      py::arg("inner_lr") = 1e-4);

  m.def(
      "run_meta_rosenbrock",
      [](const Vector& x0, double gamma, int T, double alpha, double beta, int inner_steps,
         double inner_lr) {
        return wrap(run_meta(x0, *make_rescaled_rosenbrock(),
                             meta_config(gamma, T, alpha, beta, inner_steps, inner_lr)));
      },
      py::arg("x0"), py::arg("gamma") = 1e-2, py::arg("T") = 2000, py::arg("alpha") = 1.0,
      py::arg("beta") = 0.5, py::arg("inner_steps") = 10, py::arg("inner_lr") = 1e-4);

  m.def(
      "gd_run",
      [](const Matrix& A, const Vector& b, const Vector& x0, double gamma, int T) {
        return as_rows(gd_run(x0, *make_quadratic(A, b), baseline_config(gamma, T, {})).trajectory);
      },
      py::arg("A"), py::arg("b"), py::arg("x0"), py::arg("gamma"), py::arg("T"));

  m.def(
      "nesterov_run",
      [](const Matrix& A, const Vector& b, const Vector& x0, double gamma, int T,
         std::optional<double> momentum) {
        return as_rows(
            nesterov_run(x0, *make_quadratic(A, b), baseline_config(gamma, T, momentum)).trajectory);
      },
      py::arg("A"), py::arg("b"), py::arg("x0"), py::arg("gamma"), py::arg("T"),
      py::arg("momentum") = py::none());

  py::class_<BoundReport>(m, "BoundReport")
      .def_property_readonly("name", [](const BoundReport& r) { return to_string(r.bound_name); })
      .def_readonly("satisfied_from", &BoundReport::satisfied_from)
      .def_readonly("margin", &BoundReport::margin)
      .def("holds_throughout", &BoundReport::holds_throughout);

  m.def(
      "rate_bounds",
      [](const Matrix& A, const Matrix& C, const Vector& b, const Vector& x0, int T) {
        const auto f = make_quadratic(A, b);
        const QuadraticPenalty phi(C);
        const auto sol = solve_phi_tilde(A, C);
        const auto traj = generate_trajectory(x0, sol, phi, b, T);
        const auto rc = relative_constants(sol.phi_tilde, C);
        const QuadraticValueOracle J(sol, b);
        std::vector<BoundReport> out{check_thm12(traj, J, phi)};
        for (auto& r : check_thm13(traj, J, phi, b, rc.lambda, rc.mu)) out.push_back(std::move(r));
        for (auto& r : check_thm14(traj, *f, phi, rc.lambda, rc.mu)) out.push_back(std::move(r));
        return out;
      },
      py::arg("A"), py::arg("C"), py::arg("b"), py::arg("x0"), py::arg("T"));
}
