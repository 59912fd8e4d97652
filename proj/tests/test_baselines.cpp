#include <doctest.h>

#include <cmath>

#include "regret/baselines.hpp"
#include "test_util.hpp"

using namespace regret;
using regret::test::vec;

namespace {

std::shared_ptr<const QuadraticObjective> half_square() {
  return make_quadratic(Matrix::Identity(1, 1), Vector::Zero(1));
}

BaselineConfig config(double gamma, int T) {
  BaselineConfig c;
  c.gamma = gamma;
  c.T = T;
  return c;
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("gradient descent on the scalar quadratic") {
  const auto f = half_square();
  CHECK(gd_run(vec({1}), *f, config(0.1, 1)).trajectory[1][0] == doctest::Approx(0.9));
  const auto run = gd_run(vec({1}), *f, config(0.1, 50));
  CHECK(run.grad_evals == 50);
  CHECK(run.trajectory.horizon() == 50);
  CHECK(run.trajectory[50][0] == doctest::Approx(5.15e-3).epsilon(1e-3));
  for (int t = 0; t <= 50; ++t) {
    CHECK(std::abs(run.trajectory[t][0] - std::pow(0.9, t)) <= 1e-12);
  }
}

TEST_CASE("Nesterov starts with a gradient step and accelerates") {
  const auto f = half_square();
  const auto nes1 = nesterov_run(vec({1}), *f, config(0.1, 1));
  CHECK(nes1.trajectory[1][0] == doctest::Approx(0.9));

  const auto gd = gd_run(vec({1}), *f, config(0.1, 100));
  const auto nes = nesterov_run(vec({1}), *f, config(0.1, 100));
  CHECK(nes.grad_evals == 100);
  CHECK(f->value(nes.trajectory[100]) <= f->value(gd.trajectory[100]));
}

TEST_CASE("fixed momentum mode") {
  const auto f = half_square();
  auto cfg = config(0.1, 3);
  cfg.fixed_momentum = 0.5;
  const auto run = nesterov_run(vec({1}), *f, cfg);
  // y_0 = 1 → x_1 = 0.9; y_1 = 0.9 − 0.05 = 0.85 → x_2 = 0.765.
  CHECK(run.trajectory[1][0] == doctest::Approx(0.9));
  CHECK(run.trajectory[2][0] == doctest::Approx(0.765));
}

TEST_CASE("optimum is a fixed point") {
  std::mt19937_64 rng(6);
  const auto f = make_quadratic(test::spd(3, rng), test::gaussian(3, rng));
  for (const auto& traj : {gd_run(f->b(), *f, config(0.1, 20)).trajectory,
                           nesterov_run(f->b(), *f, config(0.1, 20)).trajectory}) {
    for (const auto& x : traj.points()) CHECK((x - f->b()).norm() == 0.0);
  }
}

TEST_CASE("invalid configurations") {
  const auto f = half_square();
  CHECK_THROWS_AS(gd_run(vec({1}), *f, config(0.0, 5)), std::invalid_argument);
  CHECK_THROWS_AS(gd_run(vec({1}), *f, config(0.1, 0)), std::invalid_argument);
  auto cfg = config(0.1, 5);
  cfg.fixed_momentum = 1.0;
  CHECK_THROWS_AS(nesterov_run(vec({1}), *f, cfg), std::invalid_argument);
  CHECK_THROWS_AS(gd_run(vec({1, 1}), *f, config(0.1, 5)), std::invalid_argument);
  // Overflow surfaces as an error rather than a silent inf trajectory.
  CHECK_THROWS_AS(gd_run(vec({1}), *f, config(1e10, 200)), std::runtime_error);
}

}  // TEST_SUITE
