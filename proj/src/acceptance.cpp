#include "regret/acceptance.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "regret/baselines.hpp"
#include "regret/config.hpp"
#include "regret/experiments.hpp"
#include "regret/finite_horizon.hpp"
#include "regret/meta_optimizer.hpp"
#include "regret/quadratic_closed_form.hpp"
#include "regret/rates.hpp"

namespace regret {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix M(rows, cols);
  for (Eigen::Index j = 0; j < M.cols(); ++j)
    for (Eigen::Index i = 0; i < M.rows(); ++i) M(i, j) = n(rng);
  return M;
}

Matrix random_spd(int d, std::mt19937_64& rng) {
  const Matrix M = random_matrix(d, d, rng);
  return M.transpose() * M / d + 0.5 * Matrix::Identity(d, d);
}

Matrix random_orthogonal(int d, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(d, d, rng));
  return qr.householderQ() * Matrix::Identity(d, d);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct Check {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) detail << "; ";
      ok = false;
      detail << what;
    }
  }
};

// The standard scalar instance: f(x) = x²/2, φ(z) = z²/2.
std::shared_ptr<const QuadraticObjective> scalar_quadratic() {
  return make_quadratic(Matrix::Identity(1, 1), Vector::Zero(1));
}

struct QuadInstance {
  std::string name;
  Matrix A;
  Matrix C;
  Vector b;
  Vector x0;
};

std::vector<QuadInstance> rate_instances() {
  Matrix A2(2, 2);
  A2 << 2, 1, 1, 2;
  Matrix C2(2, 2);
  C2 << 2, 0.5, 0.5, 1;
  Vector b2(2), x2(2);
  b2 << 0.5, -0.5;
  x2 << 2.0, 1.0;
  Matrix A3 = Matrix::Zero(2, 2);
  A3.diagonal() << 1.0, 3.0;
  return {
      {"scalar a=c=1", Matrix::Identity(1, 1), Matrix::Identity(1, 1), Vector::Zero(1),
       Vector::Ones(1)},
      {"2-D A=[2,1;1,2] C=I", A2, Matrix::Identity(2, 2), b2, x2},
      {"2-D A=diag(1,3) C=I", A3, Matrix::Identity(2, 2), Vector::Zero(2), x2},
      {"2-D A=[2,1;1,2] C=[2,.5;.5,1]", A2, C2, b2, x2},
  };
}

struct RateSetup {
  PhiTildeSolution sol;
  QuadraticPenalty phi;
  std::shared_ptr<const QuadraticObjective> f;
  RelativeConstants rc;
  Trajectory traj;
};

RateSetup rate_setup(const QuadInstance& q, int T) {
  auto sol = solve_phi_tilde(q.A, q.C);
  QuadraticPenalty phi(q.C);
  auto f = make_quadratic(q.A, q.b);
  const auto rc = relative_constants(sol.phi_tilde, q.C);
  auto traj = generate_trajectory(q.x0, sol, phi, q.b, T);
  return {std::move(sol), std::move(phi), std::move(f), rc, std::move(traj)};
}

// --- criteria -------------------------------------------------------------

void criterion1(Check& c, const AcceptanceOptions& opts) {
  const int dims[] = {1, 2, 5, 20};
  double worst_res = 0.0, worst_root = 0.0;
  int worst_iters = 0;
  for (int seed = 0; seed < 20; ++seed) {
    const int d = dims[seed % 4];
    std::mt19937_64 rng(1000 + seed);
    const Matrix A = random_spd(d, rng);
    const Matrix C = random_spd(d, rng);
    const auto sol = solve_phi_tilde(A, C);
    const double res = phi_tilde_residual(A, C, sol.phi_tilde);
    worst_res = std::max(worst_res, res);
    worst_iters = std::max(worst_iters, sol.iterations);
    c.require(sol.converged && res <= 1e-10 && sol.iterations <= 500,
              "pair " + std::to_string(seed) + " residual " + sci(res) + " after " +
                  std::to_string(sol.iterations) + " iterations");

    // Commuting pair sharing the eigenbasis Q: Φ̃ = Q diag(c_i Ψ(a_i/c_i)) Qᵀ.
    const Matrix Q = random_orthogonal(d, rng);
    Vector a(d), cc(d), root(d);
    for (int i = 0; i < d; ++i) {
      a[i] = uniform(rng, 0.1, 5.0);
      cc[i] = uniform(rng, 0.1, 5.0);
      root[i] = cc[i] * opts.psi(a[i] / cc[i]);
    }
    const Matrix Ac = Q * a.asDiagonal() * Q.transpose();
    const Matrix Cc = Q * cc.asDiagonal() * Q.transpose();
    const Matrix expected = Q * root.asDiagonal() * Q.transpose();
    const auto solc = solve_phi_tilde(Ac, Cc);
    const double err = (solc.phi_tilde - expected).cwiseAbs().maxCoeff();
    worst_root = std::max(worst_root, err);
    c.require(solc.converged && err <= 1e-9,
              "commuting pair " + std::to_string(seed) + " differs from c*psi(a/c) by " + sci(err));
  }
  c.detail << (c.ok ? "" : "; ") << "max residual " << sci(worst_res) << ", max iterations "
           << worst_iters << ", max scalar-root error " << sci(worst_root);
}

void criterion2(Check& c) {
  double worst_dyn = 0.0;
  for (int seed = 0; seed < 6; ++seed) {
    const int d = 1 + seed % 3 * 2;
    std::mt19937_64 rng(2000 + seed);
    const Matrix A = random_spd(d, rng);
    const Matrix C = random_spd(d, rng);
    const Vector b = random_matrix(d, 1, rng);
    const Vector x0 = random_matrix(d, 1, rng);
    const auto sol = solve_phi_tilde(A, C);
    const QuadraticPenalty phi(C);
    const auto f = make_quadratic(A, b);
    const auto traj = generate_trajectory(x0, sol, phi, b, 100);
    const auto r = dynamics_residual(traj, *f, phi);
    const double m = *std::max_element(r.begin(), r.end());
    worst_dyn = std::max(worst_dyn, m);
    c.require(m <= 1e-8, "closed-form seed " + std::to_string(seed) + " residual " + sci(m));
  }

  struct Case { int d; int T; std::uint64_t seed; };
  double worst_grad = 0.0;
  for (const Case& k : {Case{1, 60, 1}, Case{2, 40, 2}, Case{3, 30, 3}, Case{5, 20, 4}}) {
    std::mt19937_64 rng(2100 + k.seed);
    const Matrix A = random_spd(k.d, rng);
    const Matrix C = random_spd(k.d, rng);
    const Vector b = random_matrix(k.d, 1, rng);
    const Vector x0 = random_matrix(k.d, 1, rng);
    const QuadraticPenalty phi(C);
    const auto f = make_quadratic(A, b);
    const auto res = solve_finite(x0, k.T, *f, phi);
    worst_grad = std::max(worst_grad, res.final_gradient_norm);
    c.require(res.converged && res.final_gradient_norm <= 1e-10,
              "solve_finite d=" + std::to_string(k.d) + " T=" + std::to_string(k.T) +
                  " gradient " + sci(res.final_gradient_norm));
  }
  c.detail << (c.ok ? "" : "; ") << "max closed-form residual " << sci(worst_dyn)
           << ", max solver gradient " << sci(worst_grad);
}

void criterion3(Check& c) {
  double worst = 0.0;
  const auto rosen = make_rescaled_rosenbrock();
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(3000 + seed);
    const bool use_rosen = seed % 4 == 3;
    const int d = use_rosen ? 2 : 1 + seed % 5;
    const int T = 2 + static_cast<int>(rng() % 9);
    ObjectivePtr f = use_rosen ? rosen
                               : ObjectivePtr(make_quadratic(random_spd(d, rng),
                                                             Vector(random_matrix(d, 1, rng))));
    const QuadraticPenalty phi(random_spd(d, rng));
    std::vector<Vector> pts;
    for (int t = 0; t <= T; ++t) pts.push_back(random_matrix(d, 1, rng));
    const Trajectory traj(pts);
    const auto g = gateaux_gradient(traj, *f, phi);

    double num = 0.0, den = 0.0;
    for (int t = 1; t <= T; ++t) {
      for (int i = 0; i < d; ++i) {
        const double h = 1e-6 * (1.0 + std::abs(pts[t][i]));
        auto plus = pts, minus = pts;
        plus[t][i] += h;
        minus[t][i] -= h;
        const double fd = (regret(Trajectory(plus), *f, phi).total -
                           regret(Trajectory(minus), *f, phi).total) / (2.0 * h);
        const double an = g[static_cast<std::size_t>(t - 1)][i];
        num += (fd - an) * (fd - an);
        den += an * an;
      }
    }
    const double rel = std::sqrt(num) / std::max(std::sqrt(den), 1e-12);
    worst = std::max(worst, rel);
    c.require(rel <= 1e-5, "trajectory " + std::to_string(seed) + " relative error " + sci(rel));
  }
  c.detail << (c.ok ? "" : "; ") << "max relative error " << sci(worst);
}

void criterion4(Check& c) {
  const auto f = scalar_quadratic();
  const QuadraticPenalty phi(Matrix::Identity(1, 1));
  const Vector x0 = Vector::Ones(1);
  // Both sides are solved close to machine precision so the measured
  // disagreement tracks the horizon effect until it reaches roundoff.
  const auto sol = solve_phi_tilde(f->A(), phi.C(), 1e-15);
  const auto inf = generate_trajectory(x0, sol, phi, f->b(), 5);
  SolveConfig tight;
  tight.tol = 1e-15;
  std::vector<double> seq;
  for (int T : {10, 20, 40, 80}) {
    const auto res = solve_finite(x0, T, *f, phi, tight);
    c.require(res.converged, "solve_finite T=" + std::to_string(T) + " did not converge");
    double d = 0.0;
    for (int t = 0; t <= 5; ++t) d = std::max(d, (res.trajectory[t] - inf[t]).norm());
    seq.push_back(d);
  }
  c.require(seq.back() <= 1e-6, "T=80 deviates from closed form by " + sci(seq.back()));
  for (std::size_t i = 1; i < seq.size(); ++i) {
    c.require(seq[i] < seq[i - 1], "disagreement not strictly decreasing at index " +
                                       std::to_string(i));
  }
  c.detail << (c.ok ? "" : "; ") << "disagreement over T=10,20,40,80:";
  for (double v : seq) c.detail << ' ' << sci(v);
}

void criterion5(Check& c) {
  struct Case { std::string name; Matrix A; Matrix C; Vector b; Vector x0; int T; };
  Matrix A2(2, 2);
  A2 << 2, 1, 1, 2;
  Vector b2(2), x2(2);
  b2 << 0.5, -0.5;
  x2 << 1.5, 1.0;
  Matrix C1 = Matrix::Identity(1, 1) * 2.0;
  const std::vector<Case> cases{
      {"1-D a=c=1 T=5", Matrix::Identity(1, 1), Matrix::Identity(1, 1), Vector::Zero(1),
       Vector::Ones(1), 5},
      {"1-D a=1 c=2 T=20", Matrix::Identity(1, 1), C1, Vector::Ones(1), Vector::Constant(1, -1.0),
       20},
      {"2-D T=10", A2, Matrix::Identity(2, 2), b2, x2, 10},
  };
  double worst = 0.0;
  for (const auto& k : cases) {
    const QuadraticPenalty phi(k.C);
    const auto f = make_quadratic(k.A, k.b);
    const auto res = solve_finite(k.x0, k.T, *f, phi);
    const double J = value_function(k.x0, k.T, *f, phi);
    const double gap = std::abs(res.regret - J);
    worst = std::max(worst, gap);
    c.require(res.converged && gap <= 1e-6, k.name + ": |R_T - J^T| = " + sci(gap));
  }
  c.detail << (c.ok ? "" : "; ") << "max |R_T - J^T| " << sci(worst);
}

void criterion6(Check& c) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& q : rate_instances()) {
    const auto s = rate_setup(q, 200);
    const auto r = check_thm12(s.traj, QuadraticValueOracle(s.sol, q.b), s.phi);
    worst = std::min(worst, r.margin);
    c.require(r.holds_throughout() && r.margin >= 0.0, q.name + ": dual bound fails");
  }
  c.detail << (c.ok ? "" : "; ") << "min margin " << sci(worst);
}

void criterion7(Check& c) {
  for (const auto& q : rate_instances()) {
    const auto s = rate_setup(q, 200);
    const auto reports =
        check_thm13(s.traj, QuadraticValueOracle(s.sol, q.b), s.phi, q.b, s.rc.lambda, s.rc.mu);
    for (const auto& r : reports) {
      c.require(r.holds_throughout(), q.name + ": " + to_string(r.bound_name) + " fails");
    }
  }
  c.detail << (c.ok ? "" : "; ") << "1/t and geometric value bounds checked for t <= 200 on "
           << rate_instances().size() << " instances";
}

void criterion8(Check& c) {
  int worst_t2 = 0, worst_exp = 0;
  double worst_ratio = 0.0;
  for (const auto& q : rate_instances()) {
    const auto s = rate_setup(q, 200);
    const auto reports = check_thm14(s.traj, *s.f, s.phi, s.rc.lambda, s.rc.mu);
    for (const auto& r : reports) {
      if (r.bound_name == BoundName::thm14_t2) {
        c.require(r.satisfied_from && *r.satisfied_from <= 5, q.name + ": 1/t^2 bound index");
        worst_t2 = std::max(worst_t2, r.satisfied_from.value_or(1 << 30));
      } else if (r.bound_name == BoundName::thm14_exp) {
        c.require(r.satisfied_from && *r.satisfied_from <= 10, q.name + ": exponential bound index");
        worst_exp = std::max(worst_exp, r.satisfied_from.value_or(1 << 30));
      }
    }
    const auto a = step_potential(s.traj, *s.f, s.phi);
    for (std::size_t t = 1; t < a.size(); ++t) {
      if (a[t] > a[t - 1] + kBoundSlack) {
        c.require(false, q.name + ": a_t increases at t=" + std::to_string(t));
        break;
      }
    }
    const double ratio = (100.0 * a[100]) / (10.0 * a[10]);
    worst_ratio = std::max(worst_ratio, ratio);
    c.require(ratio <= 0.1, q.name + ": t*a_t ratio " + sci(ratio));
  }
  c.detail << (c.ok ? "" : "; ") << "1/t^2 bound from t=" << worst_t2
           << ", exponential bound from t=" << worst_exp << ", max 100*a_100/(10*a_10) "
           << sci(worst_ratio);
}

void criterion9(Check& c) {
  double worst = 0.0;
  const auto rosen = make_rescaled_rosenbrock();
  for (int seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(9000 + seed);
    const int T = 10 * (seed + 1);
    MetaParams theta{uniform(rng, 0.2, 1.5), uniform(rng, 0.1, 0.9)};
    ObjectivePtr f;
    Vector x0;
    double gamma;
    if (seed == 4) {
      f = rosen;
      x0 = Vector(2);
      x0 << -1.0, 1.0;
      gamma = 1e-3;
    } else {
      const int d = 1 + seed;
      const Matrix A = random_spd(d, rng);
      const double lmax = Eigen::SelfAdjointEigenSolver<Matrix>(A).eigenvalues().maxCoeff();
      gamma = uniform(rng, 0.2, 1.0) / lmax;
      f = make_quadratic(A, random_matrix(d, 1, rng));
      x0 = random_matrix(d, 1, rng);
    }
    const auto phi = QuadraticPenalty::from_learning_rate(gamma, f->dim());
    const auto roll = field_rollout(x0, theta, T, *f, phi);
    const auto chk = loss_identity_check(roll, *f, phi);
    const double rel = chk.gap / std::max(std::abs(chk.rhs), 1e-300);
    worst = std::max(worst, rel);
    c.require(rel <= 1e-10, "triple " + std::to_string(seed) + " relative gap " + sci(rel));
  }
  c.detail << (c.ok ? "" : "; ") << "max relative gap " << sci(worst);
}

void criterion10(Check& c) {
  // Budget: count every gradient call through a wrapper.
  for (int T : {1, 7, 50}) {
    const auto base = make_rescaled_rosenbrock();
    auto calls = std::make_shared<long>(0);
    FunctionObjective counted(
        2, [base](const Vector& x) { return base->value(x); },
        [base, calls](const Vector& x) {
          ++*calls;
          return base->gradient(x);
        },
        base->optimum(), base->optimal_value());
    MetaConfig mc;
    mc.gamma = 1e-2;
    mc.T = T;
    Vector x0 = Vector::Zero(2);
    const auto run = run_meta(x0, counted, mc);
    c.require(*calls == T + 1 && run.total_grad_evals == T + 1,
              "T=" + std::to_string(T) + " used " + std::to_string(*calls) + " gradients");
  }

  MetaConfig scalar;
  scalar.gamma = 0.1;
  scalar.theta0 = {1.0, 0.5};
  scalar.T = 200;
  const auto q = run_meta(Vector::Ones(1), *scalar_quadratic(), scalar);
  c.require(!q.diverged && q.f_values.back() <= 1e-6,
            "scalar quadratic final f " + sci(q.f_values.back()));

  const auto cfg = parse_config_string("experiment = rosenbrock2d\noutput_dir = unused\n");
  const auto r = run_meta(cfg.x0, *make_rescaled_rosenbrock(), cfg.meta_config());
  bool positive = true;
  for (const auto& th : r.theta) positive = positive && th.alpha > 0.0 && th.beta > 0.0;
  bool finite = true;
  for (double v : r.f_values) finite = finite && std::isfinite(v);
  c.require(finite && !r.diverged, "rosenbrock loss series not finite");
  c.require(positive, "rosenbrock theta left the positive orthant");
  c.require(r.f_values.back() <= 1e-3, "rosenbrock final f " + sci(r.f_values.back()) + " > 1e-3");

  // Qualitative shape: the loss envelope over the last tenth sits below the
  // first tenth, and theta moves less at the end than at the start.
  const std::size_t n = r.f_values.size(), w = std::max<std::size_t>(1, n / 10);
  const double head = *std::max_element(r.f_values.begin(), r.f_values.begin() + w);
  const double tail = *std::max_element(r.f_values.end() - w, r.f_values.end());
  auto drift = [&](std::size_t from, std::size_t to) {
    return std::abs(r.theta[to].alpha - r.theta[from].alpha) +
           std::abs(r.theta[to].beta - r.theta[from].beta);
  };
  const double early = drift(0, w), late = drift(n - 1 - w, n - 1);
  c.detail << (c.ok ? "" : "; ") << "scalar final f " << sci(q.f_values.back())
           << ", rosenbrock final f " << sci(r.f_values.back()) << ", loss envelope "
           << sci(head) << " -> " << sci(tail) << ", theta drift " << sci(early) << " -> "
           << sci(late);
}

void criterion11(Check& c, const AcceptanceOptions& opts) {
  auto cfg = parse_config_string("experiment = quadratic_hd\noutput_dir = unused\ndim = " +
                                 std::to_string(opts.hd_dim) + "\n");
  const auto f = make_objective(cfg);
  const auto cmp = run_comparison(*f, cfg.x0, cfg);
  auto finite = [](const std::vector<double>& v, std::size_t n) {
    return v.size() == n && std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  const std::size_t n = static_cast<std::size_t>(cfg.T) + 1;
  c.require(finite(cmp.meta_f, n), "meta loss series incomplete or non-finite");
  c.require(finite(cmp.gd_f, n), "gd loss series incomplete or non-finite");
  c.require(finite(cmp.nesterov_f, n), "nesterov loss series incomplete or non-finite");
  c.require(!cmp.diverged, "a run diverged");
  if (!cmp.meta_f.empty() && !cmp.gd_f.empty() && !cmp.nesterov_f.empty()) {
    c.detail << (c.ok ? "" : "; ") << "dim " << opts.hd_dim << ", final f meta "
             << sci(cmp.meta_f.back()) << " gd " << sci(cmp.gd_f.back()) << " nesterov "
             << sci(cmp.nesterov_f.back()) << " (f(x0) " << sci(cmp.gd_f.front()) << ")";
  }
}

struct CriterionDef {
  int id;
  const char* title;
  double budget;
};

const CriterionDef kCriteria[] = {
    {1, "Riccati-type fixed point and scalar root", 5},
    {2, "optimality dynamics residual", 30},
    {3, "Gateaux derivative vs finite differences", 5},
    {4, "time consistency", 10},
    {5, "dynamic-programming oracle agreement", 60},
    {6, "dual value bound", 10},
    {7, "value-function rate bounds", 10},
    {8, "per-step potential bounds", 10},
    {9, "meta-loss identity", 5},
    {10, "meta-optimizer budget and behaviour", 60},
    {11, "high-dimensional smoke test", 120},
    {12, "end-to-end verify", 300},
};

}  // namespace

AcceptanceOptions default_acceptance_options() {
  AcceptanceOptions o;
  o.psi = [](double x) { return psi(x); };
  return o;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  if (id < 1 || id > 11) throw std::invalid_argument("run_criterion: id must be in [1, 11]");
  const CriterionDef& def = kCriteria[id - 1];
  CriterionResult out;
  out.id = id;
  out.title = def.title;
  out.budget_seconds = def.budget;
  Check c;
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case 1: criterion1(c, opts); break;
      case 2: criterion2(c); break;
      case 3: criterion3(c); break;
      case 4: criterion4(c); break;
      case 5: criterion5(c); break;
      case 6: criterion6(c); break;
      case 7: criterion7(c); break;
      case 8: criterion8(c); break;
      case 9: criterion9(c); break;
      case 10: criterion10(c); break;
      case 11: criterion11(c, opts); break;
    }
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.require(out.seconds <= out.budget_seconds, "over the " + sci(out.budget_seconds) + " s budget");
  out.passed = c.ok;
  out.detail = c.detail.str();
  return out;
}

std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& opts, const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> results;
  double total = 0.0;
  bool all = true;
  for (int id = 1; id <= 11; ++id) {
    results.push_back(run_criterion(id, opts));
    total += results.back().seconds;
    all = all && results.back().passed;
    if (on_result) on_result(results.back());
  }
  CriterionResult agg;
  agg.id = 12;
  agg.title = kCriteria[11].title;
  agg.budget_seconds = kCriteria[11].budget;
  agg.seconds = total;
  agg.passed = all && total <= agg.budget_seconds;
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  agg.detail = std::to_string(11 - failed) + "/11 criteria passed";
  if (total > agg.budget_seconds) agg.detail += "; over the 300 s budget";
  results.push_back(agg);
  if (on_result) on_result(agg);
  return results;
}

std::string format_result(const CriterionResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "criterion %2d  %s  %-42s (%.2f s / %.0f s)", r.id,
                r.passed ? "PASS" : "FAIL", r.title.c_str(), r.seconds, r.budget_seconds);
  return r.detail.empty() ? std::string(head) : std::string(head) + "  " + r.detail;
}

}  // namespace regret
