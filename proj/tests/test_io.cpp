#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "regret/config.hpp"
#include "regret/csv.hpp"
#include "regret/experiments.hpp"
#include "regret/svg.hpp"
#include "test_util.hpp"

using namespace regret;
using regret::test::mat;
using regret::test::vec;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string config_field_of(const std::string& text) {
  try {
    parse_config_string(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("regret_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("number formatting round-trips") {
  CHECK(csv::format_double(0.5) == "0.5");
  CHECK(csv::format_double(0.1) == "0.10000000000000001");
  CHECK(csv::format_double(std::nan("")) == "nan");
  CHECK(csv::format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(csv::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  const double v = 1.0 / 3.0;
  CHECK(std::stod(csv::format_double(v)) == v);
}

TEST_CASE("trajectory CSV layout") {
  const auto f = make_quadratic(Matrix::Identity(1, 1), Vector::Zero(1));
  const QuadraticPenalty phi(Matrix::Identity(1, 1));
  std::ostringstream os;
  csv::write_trajectory(os, Trajectory({vec({1}), vec({0.5}), vec({0.25})}), *f, phi);
  const auto ls = lines(os.str());
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] == "t,x_0,f_value,step_penalty,cumulative_regret,residual");
  // step_penalty of row t is φ(Δx_{t−1}); the residual exists only at interior t.
  CHECK(ls[1] == "0,1,0.5,0,0,");
  CHECK(ls[2].rfind("1,0.5,0.125,0.125,0.25,", 0) == 0);
  CHECK(ls[3] == "2,0.25,0.03125,0.03125,0.3125,");
}

TEST_CASE("probe, matrix, bounds and column CSVs") {
  std::ostringstream probe;
  csv::write_probe(probe, {{10, 20, 0.5, true}});
  CHECK(probe.str() == "T_low,T_high,max_first_k_diff\n10,20,0.5\n");

  std::ostringstream m;
  csv::write_matrix(m, mat(2, 2, {1, 2, 3, 4}));
  CHECK(m.str() == "1,2\n3,4\n");

  std::ostringstream b;
  csv::write_bounds(b, {scan_bound(BoundName::thm12, 1, {1, 0.5}, {2, 1}),
                        scan_bound(BoundName::cor3, 2, {0, 3}, {1, 2})});
  CHECK(b.str() == "bound_name,satisfied_from,margin\nthm12,1,0.5\ncor3,,-1\n");

  std::ostringstream c;
  csv::write_columns(c, {"a", "b"}, {{1, 2}, {3}});
  CHECK(c.str() == "t,a,b\n0,1,3\n1,2,\n");
}

TEST_CASE("meta history CSV") {
  const auto f = make_quadratic(Matrix::Identity(1, 1), Vector::Zero(1));
  MetaConfig cfg;
  cfg.T = 3;
  const auto run = run_meta(vec({1}), *f, cfg);
  std::ostringstream os;
  csv::write_meta_history(os, run);
  const auto ls = lines(os.str());
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "t,f_value,alpha,beta,frozen_loss,grad_eval_count");
  CHECK(ls[1] == "0,0.5,1,0.5,,1");
  CHECK(ls[4].substr(ls[4].size() - 2) == ",4");
}

TEST_CASE("SVG output is deterministic and well formed") {
  const svg::Series s{"loss", {0, 1, 2, 3}, {1, 0.1, 0.0, 0.001}};
  svg::ChartOptions opts;
  opts.title = "Loss";
  opts.log_y = true;
  const auto a = svg::line_chart({s}, opts);
  CHECK(a == svg::line_chart({s}, opts));
  CHECK(a.rfind("<svg", 0) == 0);
  CHECK(a.find("viewBox=\"0 0 800 500\"") != std::string::npos);
  CHECK(a.find("</svg>") != std::string::npos);
  CHECK(a.find("nan") == std::string::npos);

  const auto f = make_rescaled_rosenbrock();
  const svg::PathSeries p{"gd", Trajectory({vec({0, 0}), vec({1, 0.1}), vec({2, 0.2})})};
  const auto c = svg::path_overlay(*f, {p}, "paths");
  CHECK(c == svg::path_overlay(*f, {p}, "paths"));
  CHECK(c.find("<path") != std::string::npos);
  CHECK(c.find("<circle") != std::string::npos);
}

TEST_CASE("config parsing fills per-experiment defaults") {
  const auto r = parse_config_string("experiment = rosenbrock2d\noutput_dir = out  # dir\n");
  CHECK(r.experiment == Experiment::rosenbrock2d);
  CHECK(r.dim == 2);
  CHECK(r.gamma == 1e-2);
  CHECK(r.T == 2000);
  CHECK(r.x0.size() == 2);
  CHECK(r.output_dir == "out");
  CHECK(r.inner_steps == 10);
  CHECK(r.inner_lr == 1e-4);

  const auto q = parse_config_string(
      "# study\nexperiment=quadratic_closed_form_study\noutput_dir=o\n"
      "A = 2,1; 1,2\nb = 0.5,-0.5\ntheta0 = 0.2,0.3\nhorizons = 5,10\nk = 3\n");
  CHECK(q.dim == 2);
  CHECK(q.A == mat(2, 2, {2, 1, 1, 2}));
  CHECK(q.C == Matrix::Identity(2, 2));
  CHECK(q.theta0.alpha == 0.2);
  CHECK(q.theta0.beta == 0.3);
  CHECK(q.horizons == std::vector<int>{5, 10});
  CHECK(q.meta_config().T == q.T);

  const auto hd = parse_config_string("experiment=quadratic_hd\noutput_dir=o\ndim=8\nseed=3\n");
  CHECK(hd.dim == 8);
  CHECK(hd.seed == 3);
  CHECK_FALSE(hd.write_trajectories);
}

TEST_CASE("config errors name the field") {
  const std::string base = "experiment=quadratic_closed_form_study\noutput_dir=o\n";
  CHECK(config_field_of(base + "gamma=0\n") == "gamma");
  CHECK(config_field_of(base + "gamma=-1\n") == "gamma");
  CHECK(config_field_of(base + "gamma=abc\n") == "gamma");
  CHECK(config_field_of(base + "T=0\n") == "T");
  CHECK(config_field_of(base + "inner_steps=0\n") == "inner_steps");
  CHECK(config_field_of(base + "alpha=-1\n") == "alpha");
  CHECK(config_field_of(base + "bogus=1\n") == "bogus");
  CHECK(config_field_of(base + "T=5\nT=6\n") == "T");
  CHECK(config_field_of(base + "A=1,2;3,4\n") == "A");
  CHECK(config_field_of(base + "x0=1,2\n") == "x0");
  CHECK(config_field_of(base + "horizons=10,5\n") == "horizons");
  CHECK(config_field_of(base + "theta0=1,2\nalpha=1\n") == "theta0");
  CHECK(config_field_of("output_dir=o\n") == "experiment");
  CHECK(config_field_of("experiment=nope\noutput_dir=o\n") == "experiment");
  CHECK(config_field_of("experiment=rosenbrock2d\n") == "output_dir");
  CHECK(config_field_of("experiment=rosenbrock2d\noutput_dir=o\ndim=3\n") == "dim");
  CHECK(config_field_of("experiment=rosenbrock2d\noutput_dir=o\nA=1\n") == "A");
  CHECK_THROWS_AS(load_config("/nonexistent/regret.cfg"), ConfigError);
  try {
    parse_config_string(base + "gamma=0\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).rfind("gamma", 0) == 0);
  }
}

TEST_CASE("help lists every key") {
  const auto help = config_keys_help();
  for (const char* key : {"experiment", "seed", "gamma", "T", "dim", "theta0", "inner_steps",
                          "inner_lr", "output_dir", "x0", "horizons", "write_trajectories"}) {
    CHECK(help.find(key) != std::string::npos);
  }
}

}  // TEST_SUITE

TEST_SUITE("experiments") {

TEST_CASE("closed-form study writes its artifacts") {
  const auto dir = scratch_dir("closed_form");
  auto cfg = parse_config_string("experiment=quadratic_closed_form_study\noutput_dir=" +
                                 dir.string() + "\nA=2,1;1,2\nb=0.5,-0.5\nT=30\n");
  const auto res = run_experiment(cfg);
  CHECK_FALSE(res.diverged);
  for (const char* name : {"phi_tilde.csv", "closed_form_trajectory.csv"}) {
    CHECK(std::filesystem::exists(dir / name));
  }
  bool saw_residual = false;
  for (const auto& [key, value] : res.summary) {
    if (key == "max_dynamics_residual") {
      saw_residual = true;
      CHECK(value <= 1e-8);
    }
  }
  CHECK(saw_residual);
}

TEST_CASE("rate and consistency studies") {
  const auto dir = scratch_dir("rates");
  const auto cfg = parse_config_string("experiment=rate_bounds\noutput_dir=" + dir.string() +
                                       "\nT=60\n");
  const auto study = rate_study(cfg);
  CHECK(study.value_fit.contraction == doctest::Approx(study.contraction * study.contraction));
  const auto res = run_rates(cfg);
  CHECK(std::filesystem::exists(dir / "bounds.csv"));
  CHECK(std::filesystem::exists(dir / "bounds.svg"));
  const auto first = slurp(dir / "bounds.csv");
  run_rates(cfg);
  CHECK(slurp(dir / "bounds.csv") == first);

  const auto cdir = scratch_dir("consistency");
  const auto ccfg = parse_config_string("experiment=time_consistency\noutput_dir=" +
                                        cdir.string() + "\nhorizons=10,20,40\nk=3\n");
  const auto cres = run_consistency(ccfg);
  CHECK_FALSE(cres.diverged);
  CHECK(lines(slurp(cdir / "probe.csv")).size() == 3);
}

TEST_CASE("comparison on a small random quadratic") {
  const auto cfg = parse_config_string(
      "experiment=quadratic_hd\noutput_dir=unused\ndim=16\nT=50\ngamma=1e-3\ninner_lr=1e-6\n");
  const auto f = make_objective(cfg);
  const auto cmp = run_comparison(*f, cfg.x0, cfg);
  CHECK_FALSE(cmp.diverged);
  CHECK(cmp.meta_f.size() == 51);
  CHECK(cmp.gd_f.size() == 51);
  CHECK(cmp.nesterov_f.size() == 51);
  for (std::size_t t = 1; t < cmp.gd_f.size(); ++t) CHECK(cmp.gd_f[t] <= cmp.gd_f[t - 1]);
}

TEST_CASE("unwritable output directory is a config error") {
  auto cfg = parse_config_string(
      "experiment=quadratic_closed_form_study\noutput_dir=/proc/regret_no_such_dir\nT=5\n");
  try {
    run_experiment(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "output_dir");
  }
}

}  // TEST_SUITE
