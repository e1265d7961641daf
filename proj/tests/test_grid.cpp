#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "rdcontract/errors.hpp"
#include "rdcontract/grid.hpp"
#include "test_util.hpp"

using namespace rdc;

TEST_CASE("uniform grid nodes and weights") {
  auto g = make_uniform_grid(3);
  CHECK(g->n == 3);
  CHECK(g->nodes[0] == 0.0);
  CHECK(g->nodes[1] == 0.5);
  CHECK(g->nodes[2] == 1.0);
  CHECK(g->quad_weights[0] == 0.25);
  CHECK(g->quad_weights[1] == 0.5);
  CHECK(g->quad_weights[2] == 0.25);

  auto g500 = make_uniform_grid(500);
  CHECK(g500->h == doctest::Approx(1.0 / 499.0).epsilon(1e-15));
  CHECK(g500->nodes[0] == 0.0);
  CHECK(g500->nodes[499] == 1.0);

  CHECK_THROWS_AS(make_uniform_grid(2), InvalidGrid);
  CHECK_THROWS_AS(make_uniform_grid(0), InvalidGrid);
}

TEST_CASE("weights sum to exactly one") {
  for (int n : {3, 4, 100, 499, 500, 501, 1000}) {
    auto g = make_uniform_grid(n);
    CHECK(integrate(constant_field(g, 1.0)) == 1.0);
  }
}

TEST_CASE("trapezoid integration is exact on affine functions") {
  auto g = make_uniform_grid(500);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    double a = u(rng), b = u(rng);
    auto f = field_from_function(g, [&](double x) { return a + b * x; });
    CHECK(std::abs(integrate(f) - (a + 0.5 * b)) < 1e-13);
  }
}

TEST_CASE("trapezoid integration converges at second order") {
  const double omega = 1.0;
  const double exact = (1.0 - std::cos(omega)) / omega;
  auto g = make_uniform_grid(500);
  auto f = field_from_function(g, [&](double x) { return std::sin(omega * x); });
  CHECK(std::abs(integrate(f) - exact) < 1e-6);

  // error drops ~4x when h halves
  auto g2 = make_uniform_grid(999);  // h exactly halved vs n=500
  auto f2 = field_from_function(g2, [&](double x) { return std::sin(omega * x); });
  double e1 = std::abs(integrate(f) - exact);
  double e2 = std::abs(integrate(f2) - exact);
  CHECK(e2 < 0.3 * e1);
}

TEST_CASE("compensated summation survives cancellation") {
  double xs[3] = {1e16, 1.0, -1e16};
  CHECK(neumaier_sum(xs, 3) == 1.0);
}

TEST_CASE("field construction validates the grid") {
  auto g = make_uniform_grid(10);
  auto h = make_uniform_grid(11);
  CHECK_THROWS_AS(ScalarField(g, Eigen::ArrayXd::Zero(11)), InvalidGrid);
  CHECK_THROWS_AS(ScalarField(nullptr, Eigen::ArrayXd::Zero(11)), InvalidGrid);
  CHECK_NOTHROW(ScalarField(h, Eigen::ArrayXd::Zero(11)));
}

TEST_CASE("available volume: r = 0 gives exactly ones") {
  auto g = make_uniform_grid(301);
  auto p = available_volume(0.0, 0.5, g);
  CHECK((p.v.values == 1.0).all());
}

TEST_CASE("available volume: value at the localization point") {
  // grid with 501 nodes contains x = 0.5 exactly; rho there is 1/2
  auto g = make_uniform_grid(501);
  for (double r : {0.3, 0.5, 1.0}) {
    auto p = available_volume(r, 0.5, g);
    CHECK(p.v.values[250] == doctest::Approx(std::exp(-r * r * 0.5)).epsilon(1e-14));
    CHECK(p.rho.values[250] == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("available volume: symmetric about x_star, minimum at x_star") {
  auto g = make_uniform_grid(501);
  auto p = available_volume(1.0, 0.5, g);
  int n = g->n;
  for (int i = 0; i < n; ++i)
    CHECK(p.v.values[i] == doctest::Approx(p.v.values[n - 1 - i]).epsilon(1e-13));
  int argmin = 0;
  p.v.values.minCoeff(&argmin);
  CHECK(argmin == 250);
  // monotone away from the dip on each side
  CHECK(p.v.values[0] > p.v.values[125]);
  CHECK(p.v.values[125] > p.v.values[250]);
}

TEST_CASE("available volume: parameter validation") {
  auto g = make_uniform_grid(50);
  CHECK_THROWS_AS(available_volume(-0.1, 0.5, g), InvalidParameter);
  CHECK_THROWS_AS(available_volume(0.5, 0.0, g), InvalidParameter);
  CHECK_THROWS_AS(available_volume(0.5, 1.0, g), InvalidParameter);
}

TEST_CASE("normalized profiles") {
  auto g = make_uniform_grid(400);
  SUBCASE("constant profile normalizes to exactly one") {
    auto v = constant_field(g, 0.5);
    auto vh = normalize_profile(v);
    CHECK((vh.values == 1.0).all());
  }
  SUBCASE("unit integral and idempotence") {
    std::mt19937_64 rng(11);
    auto v = ScalarField(g, tu::smooth_positive(g, rng));
    auto vh = normalize_profile(v);
    CHECK(std::abs(integrate(vh) - 1.0) < 1e-12);
    auto vhh = normalize_profile(vh);
    CHECK((vhh.values - vh.values).abs().maxCoeff() < 1e-13);
  }
  SUBCASE("crowding pushes the normalized profile maximum to the boundary") {
    auto p = available_volume(1.0, 0.5, g);
    auto vh = normalize_profile(p.v);
    int argmax = 0;
    vh.values.maxCoeff(&argmax);
    CHECK((argmax == 0 || argmax == g->n - 1));
    CHECK(vh.values.maxCoeff() > 1.0);
    CHECK(vh.values.minCoeff() < 1.0);
  }
  SUBCASE("nonpositive profile rejected") {
    Eigen::ArrayXd bad = Eigen::ArrayXd::Constant(g->n, 1.0);
    bad[3] = 0.0;
    CHECK_THROWS_AS(normalize_profile(ScalarField(g, bad)), InvalidProfile);
  }
}

TEST_CASE("norms and means") {
  auto g = make_uniform_grid(500);
  auto f = field_from_function(g, [](double x) { return std::cos(M_PI * x); });
  CHECK(l2_norm(f) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
  CHECK(std::abs(mean_value(f)) < 1e-10);

  std::vector<ScalarField> z{f, constant_field(g, 1.0)};
  CHECK(l2_norm(z) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-6));
}

TEST_CASE("integrand length is validated") {
  auto g = make_uniform_grid(20);
  Eigen::ArrayXd wrong = Eigen::ArrayXd::Zero(19);
  CHECK_THROWS_AS(integrate_values(*g, wrong), InvalidGrid);
}
