#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "regret/meta_optimizer.hpp"
#include "regret/quadratic_closed_form.hpp"
#include "test_util.hpp"

using namespace regret;
using regret::test::mat;
using regret::test::vec;

namespace {

std::shared_ptr<const QuadraticObjective> half_square() {
  return make_quadratic(Matrix::Identity(1, 1), Vector::Zero(1));
}

// ½x² whose gradient calls are counted outside the optimizer.
FunctionObjective counted_square(long& calls) {
  return FunctionObjective(
      1, [](const Vector& x) { return 0.5 * x.squaredNorm(); },
      [&calls](const Vector& x) {
        ++calls;
        return Vector(x);
      },
      vec({0}), 0.0, true);
}

}  // namespace

TEST_SUITE("meta_optimizer") {

TEST_CASE("field value and test point") {
  CHECK(field_value(MetaParams{0.3, 0.4}, vec({0}), vec({0}))[0] == 0.0);
  CHECK(field_value(MetaParams{0.1, 0.9}, vec({2}), vec({1}))[0] == doctest::Approx(1.9));
  const Vector g = vec({1.5, -2});
  CHECK((field_value(MetaParams{1, 0}, vec({7, 7}), g) - g).norm() == 0.0);
  CHECK_THROWS_AS(field_value(MetaParams{}, vec({1}), vec({1, 2})), std::invalid_argument);

  MetaState s;
  s.params = MetaParams{0.1, 0.9};
  s.nu_prev = vec({2});
  s.last_grad = vec({1});
  CHECK(field_value(s)[0] == doctest::Approx(1.9));

  const auto lr01 = QuadraticPenalty::from_learning_rate(0.1, 1);
  CHECK(test_point(vec({1}), vec({2}), lr01)[0] == doctest::Approx(0.8));
  CHECK(test_point(vec({1}), vec({0}), lr01)[0] == 1.0);
  const auto lr1 = QuadraticPenalty::from_learning_rate(1.0, 2);
  CHECK((test_point(vec({0, 0}), vec({1, -1}), lr1) - vec({-1, 1})).norm() == 0.0);
}

TEST_CASE("clamping keeps parameters positive") {
  const auto c = MetaParams{-1.0, 0.0}.clamped();
  CHECK(c.alpha == kMetaParamFloor);
  CHECK(c.beta == kMetaParamFloor);
  CHECK(MetaParams{0.2, 3.0}.clamped().beta == 3.0);
}

TEST_CASE("meta loss hand cases") {
  const auto f = half_square();
  const auto phi = QuadraticPenalty::from_learning_rate(1.0, 1);
  // ν̂(x) = 1, ŷ = 0, ∇f(ŷ) = 0, ν̂(ŷ) = 0 → ‖1‖².
  CHECK(meta_loss(MetaParams{1, 0}, vec({1}), vec({0}), vec({1}), *f, phi) == doctest::Approx(1.0));
  // Vanishing field: ŷ = x, loss → ‖∇f(x)‖².
  const double tiny = meta_loss(MetaParams{kMetaParamFloor, kMetaParamFloor}, vec({2}), vec({0}),
                                vec({2}), *f, phi);
  CHECK(tiny == doctest::Approx(4.0).epsilon(1e-6));

  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const MetaParams th{std::abs(test::gaussian(1, rng)[0]), std::abs(test::gaussian(1, rng)[0])};
    CHECK(meta_loss(th, test::gaussian(1, rng), test::gaussian(1, rng), test::gaussian(1, rng), *f,
                    phi) >= 0.0);
  }
}

TEST_CASE("frozen loss matches the meta loss at the previous parameters") {
  std::mt19937_64 rng(21);
  const auto f = make_quadratic(test::spd(3, rng), test::gaussian(3, rng));
  const auto phi = QuadraticPenalty::from_learning_rate(0.2, 3);
  const Vector x = test::gaussian(3, rng), nu = test::gaussian(3, rng);
  const Vector g = f->gradient(x);
  const MetaParams prev{0.7, 0.4};
  const FrozenLoss loss(prev, x, nu, g, *f, phi);
  CHECK(loss(prev) == doctest::Approx(meta_loss(prev, x, nu, g, *f, phi)).epsilon(1e-12));
  CHECK(frozen_loss(prev, prev, x, nu, g, *f, phi) == doctest::Approx(loss(prev)));

  for (const MetaParams th : {MetaParams{0.7, 0.4}, MetaParams{1.3, 0.05}, MetaParams{0.2, 2.0}}) {
    const MetaParams ga = loss.gradient(th), gf = loss.gradient_fd(th, 1e-6);
    CHECK(gf.alpha == doctest::Approx(ga.alpha).epsilon(1e-5));
    CHECK(gf.beta == doctest::Approx(ga.beta).epsilon(1e-5));
  }
}

TEST_CASE("gradient budget is T + 1") {
  long calls = 0;
  const auto f = counted_square(calls);
  for (int inner : {1, 10, 50}) {
    for (int T : {1, 5, 30}) {
      calls = 0;
      MetaConfig cfg;
      cfg.inner_steps = inner;
      cfg.T = T;
      const auto run = run_meta(vec({1}), f, cfg);
      CHECK(calls == T + 1);
      CHECK(run.total_grad_evals == T + 1);
      CHECK(run.grad_evals.back() == T + 1);
      CHECK(run.grad_evals.front() == 1);
    }
  }
}

TEST_CASE("finite-difference mode agrees with analytic mode") {
  const auto f = half_square();
  MetaConfig a;
  a.T = 30;
  MetaConfig b = a;
  b.theta_grad_mode = ThetaGradMode::finite_difference;
  const auto ra = run_meta(vec({1}), *f, a);
  const auto rb = run_meta(vec({1}), *f, b);
  for (int t = 0; t <= 30; ++t) CHECK(rb.f_values[t] == doctest::Approx(ra.f_values[t]).epsilon(1e-6));
}

TEST_CASE("starting at the optimum stays there") {
  const auto f = half_square();
  MetaConfig cfg;
  cfg.T = 15;
  const auto run = run_meta(vec({0}), *f, cfg);
  for (const auto& x : run.trajectory.points()) CHECK(x[0] == 0.0);
  for (double l : run.loss) CHECK(l == 0.0);
  CHECK_FALSE(run.diverged);
}

TEST_CASE("scalar quadratic run") {
  const auto f = half_square();
  MetaConfig cfg;
  cfg.gamma = 0.1;
  cfg.theta0 = {1.0, 0.5};
  cfg.T = 200;
  const auto run = run_meta(vec({1}), *f, cfg);
  REQUIRE(run.f_values.size() == 201);
  REQUIRE(run.theta.size() == 201);
  REQUIRE(run.loss.size() == 200);
  CHECK_FALSE(run.diverged);
  CHECK(run.f_values.back() <= 1e-6);
  for (const auto& th : run.theta) {
    CHECK(th.alpha >= kMetaParamFloor);
    CHECK(th.beta >= kMetaParamFloor);
  }
  // Heavy-ball iterates ripple, so compare maxima over blocks of 10 steps.
  double prev = run.f_values[10];
  for (int start = 10; start + 10 <= 200; start += 10) {
    const double block = *std::max_element(run.f_values.begin() + start + 1,
                                            run.f_values.begin() + start + 11);
    CHECK(block <= prev);
    prev = block;
  }

  const auto again = run_meta(vec({1}), *f, cfg);
  CHECK(again.f_values == run.f_values);
}

TEST_CASE("divergence is flagged") {
  const auto f = half_square();
  MetaConfig cfg;
  cfg.gamma = 5.0;  // heavy-ball root near −3.35 at θ0
  cfg.inner_lr = 1e-12;  // keep θ near θ0 so the adaptation cannot rescue it
  cfg.T = 100;
  const auto run = run_meta(vec({1}), *f, cfg);
  CHECK(run.diverged);
  CHECK(run.f_values.size() < 101);
  CHECK(run.f_values.back() > 10.0 * run.f_values.front());
}

TEST_CASE("configuration validation names the field") {
  const auto f = half_square();
  auto expect_field = [&](MetaConfig cfg, const std::string& field) {
    try {
      cfg.validate();
      FAIL("expected rejection of " << field);
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).rfind(field, 0) == 0);
    }
  };
  MetaConfig c;
  c.inner_steps = 0;
  expect_field(c, "inner_steps");
  c = {};
  c.inner_lr = 0;
  expect_field(c, "inner_lr");
  c = {};
  c.gamma = -1;
  expect_field(c, "gamma");
  c = {};
  c.T = 0;
  expect_field(c, "T");
  CHECK_THROWS_AS(run_meta(vec({1, 2}), *f, MetaConfig{}), std::invalid_argument);
}

TEST_CASE("summed meta loss equals the squared regret derivative") {
  const auto f = half_square();
  SUBCASE("T = 1 hand case") {
    const auto phi = QuadraticPenalty::from_learning_rate(1.0, 1);
    const auto roll = field_rollout(vec({1}), MetaParams{1, 0}, 1, *f, phi);
    const auto id = loss_identity_check(roll, *f, phi);
    CHECK(id.lhs == doctest::Approx(1.0));
    CHECK(id.rhs == doctest::Approx(1.0));
    CHECK(id.gap <= 1e-15);
  }
  SUBCASE("fixed theta, scalar quadratic") {
    const auto phi = QuadraticPenalty::from_learning_rate(0.5, 1);
    const auto roll = field_rollout(vec({1}), MetaParams{0.3, 0.7}, 20, *f, phi);
    CHECK(roll.horizon() == 20);
    CHECK(roll.trajectory().horizon() == 20);
    const auto id = loss_identity_check(roll, *f, phi);
    CHECK(id.gap <= 1e-10 * (1.0 + id.lhs));
    CHECK(id.lhs > 0.0);
  }
  SUBCASE("dense quadratic") {
    std::mt19937_64 rng(2);
    const auto q = make_quadratic(test::spd(3, rng), test::gaussian(3, rng));
    const auto phi = QuadraticPenalty::from_learning_rate(0.3, 3);
    const auto roll = field_rollout(test::gaussian(3, rng), MetaParams{0.6, 0.3}, 50, *q, phi);
    const auto id = loss_identity_check(roll, *q, phi);
    CHECK(id.gap <= 1e-10 * (1.0 + id.lhs));
  }
  SUBCASE("field reproducing the closed form") {
    // a = c = 1: the closed-form step is x ← (1 − Ψ(1))x, i.e. α = Ψ(1), β = 0.
    const auto phi = QuadraticPenalty::from_learning_rate(1.0, 1);
    const auto roll = field_rollout(vec({1}), MetaParams{psi(1.0), kMetaParamFloor}, 30, *f, phi);
    const auto id = loss_identity_check(roll, *f, phi);
    CHECK(id.lhs <= 1e-14);
    CHECK(id.rhs <= 1e-14);
  }
}

}  // TEST_SUITE
