#include <doctest.h>

#include <cmath>

#include "regret/objectives.hpp"
#include "test_util.hpp"

using namespace regret;
using regret::test::mat;
using regret::test::vec;

TEST_SUITE("objectives") {

TEST_CASE("quadratic value and gradient on hand-computed points") {
  const auto f1 = make_quadratic(mat(1, 1, {1}), vec({0}));
  CHECK(f1->value(vec({2})) == doctest::Approx(2.0));
  CHECK(f1->gradient(vec({2}))[0] == doctest::Approx(2.0));

  const auto f2 = make_quadratic(mat(2, 2, {2, 0, 0, 2}), vec({1, 1}));
  CHECK(f2->value(vec({1, 1})) == 0.0);
  CHECK(f2->gradient(vec({1, 1})).norm() == 0.0);

  // ½ [1,−1]ᵀ[[2,1],[1,2]][1,−1] = ½·2 = 1; A x = [1,−1].
  const auto f3 = make_quadratic(mat(2, 2, {2, 1, 1, 2}), vec({0, 0}));
  CHECK(f3->value(vec({1, -1})) == doctest::Approx(1.0));
  CHECK((f3->gradient(vec({1, -1})) - vec({1, -1})).norm() < 1e-15);
  CHECK(f3->is_convex());
  CHECK(*f3->optimal_value() == 0.0);
}

TEST_CASE("quadratic offset shifts the optimal value") {
  const QuadraticObjective f(mat(1, 1, {3}), vec({1}), 2.5);
  CHECK(f.value(vec({1})) == 2.5);
  CHECK(*f.optimal_value() == 2.5);
}

TEST_CASE("quadratic rejects invalid data") {
  CHECK_THROWS_AS(make_quadratic(mat(2, 2, {1, 2, 0, 1}), vec({0, 0})), std::invalid_argument);
  CHECK_THROWS_AS(make_quadratic(mat(2, 2, {1, 0, 0, -1}), vec({0, 0})), std::invalid_argument);
  CHECK_THROWS_AS(make_quadratic(mat(2, 2, {1, 0, 0, 1}), vec({0})), std::invalid_argument);
  CHECK_THROWS_AS(make_quadratic(Matrix(2, 3), vec({0, 0})), std::invalid_argument);
  const auto f = make_quadratic(mat(1, 1, {1}), vec({0}));
  CHECK_THROWS_AS(f->value(vec({1, 2})), std::invalid_argument);
}

TEST_CASE("quadratic Bregman divergence equals the quadratic form") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 4;
    const auto f = make_quadratic(test::spd(d, rng), test::gaussian(d, rng));
    const Vector x = test::gaussian(d, rng), y = test::gaussian(d, rng);
    const double breg = f->value(x) - f->value(y) - f->gradient(y).dot(x - y);
    CHECK(std::abs(breg - 0.5 * (x - y).dot(f->A() * (x - y))) < 1e-10);
  }
}

TEST_CASE("rescaled Rosenbrock values") {
  const auto f = make_rescaled_rosenbrock();
  CHECK(f->dim() == 2);
  CHECK(std::abs(f->value(vec({2.0, 2.0 / 9.0}))) <= 1e-15);
  CHECK(f->value(vec({0, 0})) == doctest::Approx(0.1));
  const auto opt = f->optimum();
  REQUIRE(opt);
  CHECK((*opt - vec({2.0, 2.0 / 9.0})).norm() < 1e-15);
  CHECK(f->value(*opt) == 0.0);
  CHECK(f->gradient(*opt).norm() == 0.0);
  CHECK_FALSE(f->is_convex());
}

TEST_CASE("gradients match central differences at seeded points") {
  std::mt19937_64 rng(5);
  const auto rosen = make_rescaled_rosenbrock();
  const auto quad = make_quadratic(test::spd(3, rng), test::gaussian(3, rng));
  for (int i = 0; i < 100; ++i) {
    const Vector xq = test::gaussian(3, rng, 2.0);
    const Vector gq = quad->gradient(xq);
    CHECK((test::fd_gradient(*quad, xq) - gq).norm() <= 1e-4 * std::max(gq.norm(), 1e-8));

    const Vector xr = test::gaussian(2, rng, 2.0);
    if (rosen->value(xr) < 1e-3) continue;  // stay clear of the kink
    const Vector gr = rosen->gradient(xr);
    CHECK((test::fd_gradient(*rosen, xr) - gr).norm() <= 1e-4 * gr.norm());
  }
}

TEST_CASE("function objective forwards closures") {
  int calls = 0;
  FunctionObjective f(
      1, [](const Vector& x) { return x.squaredNorm(); },
      [&](const Vector& x) {
        ++calls;
        return Vector(2.0 * x);
      },
      vec({0}), 0.0, true);
  CHECK(f.value(vec({3})) == 9.0);
  CHECK(f.gradient(vec({3}))[0] == 6.0);
  CHECK(calls == 1);
  CHECK(f.is_convex());
  CHECK_THROWS_AS(FunctionObjective(0, nullptr, nullptr), std::invalid_argument);
}

TEST_CASE("random SPD quadratic is deterministic and well posed") {
  const auto a = make_random_spd_quadratic(4, 7);
  const auto b = make_random_spd_quadratic(4, 7);
  CHECK(a->A() == b->A());
  CHECK(a->b() == b->b());
  const auto c = make_random_spd_quadratic(4, 8);
  CHECK(a->A() != c->A());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto q = make_random_spd_quadratic(6, seed);
    CHECK(smallest_eigenvalue(q->A()) >= 1e-3 - 1e-12);
    CHECK((q->A() - q->A().transpose()).norm() == 0.0);
  }
  CHECK_THROWS_AS(make_random_spd_quadratic(0, 1), std::invalid_argument);
}

}  // TEST_SUITE

TEST_SUITE("objectives_hd") {

TEST_CASE("random SPD quadratic at dimension 4096") {
  const auto q = make_random_spd_quadratic(4096, 1);
  CHECK(q->dim() == 4096);
  CHECK(q->gradient(q->b()).norm() == 0.0);
}

}  // TEST_SUITE
