#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "rdcontract/errors.hpp"
#include "rdcontract/grid.hpp"
#include "rdcontract/operators.hpp"
#include "rdcontract/simulate.hpp"
#include "test_util.hpp"

using namespace rdc;

namespace {
OperatorAssembly make_op(const GridPtr& g, double theta, const Eigen::ArrayXd& d) {
  return OperatorAssembly(g, SpeciesDiffusion{theta, ScalarField(g, d)});
}
}  // namespace

TEST_CASE("stationary weight psi") {
  auto g = make_uniform_grid(400);
  SUBCASE("constant d gives the uniform weight") {
    auto psi = psi_weight(0.8, constant_field(g, 3.7));
    CHECK((psi.values - 1.0).abs().maxCoeff() < 1e-14);
  }
  SUBCASE("theta = 1/2 erases the profile") {
    std::mt19937_64 rng(3);
    auto psi = psi_weight(0.5, ScalarField(g, tu::smooth_positive(g, rng)));
    CHECK((psi.values - 1.0).abs().maxCoeff() < 1e-14);
  }
  SUBCASE("theta = 1 tracks the normalized coefficient") {
    auto vr = available_volume(0.5, 0.5, g);
    auto d = ScalarField(g, 2.3 * vr.v.values);  // scale must cancel
    auto psi = psi_weight(1.0, d);
    auto vhat = normalize_profile(vr.v);
    CHECK((psi.values - vhat.values).abs().maxCoeff() < 1e-13);
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(psi_weight(-0.1, constant_field(g, 1.0)), InvalidSpec);
    CHECK_THROWS_AS(psi_weight(1.1, constant_field(g, 1.0)), InvalidSpec);
    Eigen::ArrayXd bad = Eigen::ArrayXd::Constant(g->n, 1.0);
    bad[7] = -1.0;
    CHECK_THROWS_AS(psi_weight(0.5, ScalarField(g, bad)), InvalidSpec);
  }
}

TEST_CASE("assembly validation") {
  auto g = make_uniform_grid(50);
  auto g2 = make_uniform_grid(60);
  CHECK_THROWS_AS(make_op(g, 1.5, Eigen::ArrayXd::Constant(g->n, 1.0)), InvalidSpec);
  CHECK_THROWS_AS(make_op(g, 0.5, Eigen::ArrayXd::Constant(g->n, 0.0)), InvalidSpec);
  CHECK_THROWS_AS(
      OperatorAssembly(g, SpeciesDiffusion{0.5, constant_field(g2, 1.0)}),
      InvalidGrid);
}

TEST_CASE("psi is the exact discrete null vector") {
  std::mt19937_64 rng(17);
  for (double theta : {0.0, 0.25, 0.5, 1.0}) {
    auto g = make_uniform_grid(300);
    auto op = make_op(g, theta, tu::smooth_positive(g, rng));
    Eigen::ArrayXd Lpsi = op.apply(op.psi().values);
    // the scheme differences y/psi, so this is zero in exact FP, not O(h^2)
    CHECK(Lpsi.abs().maxCoeff() == 0.0);
  }
  // scaled copies of psi pick up one rounding per node, nothing more
  auto g = make_uniform_grid(200);
  auto vr = available_volume(0.5, 0.5, g);
  auto op = OperatorAssembly(g, SpeciesDiffusion{1.0, vr.v});
  const double c = -3.25;
  CHECK(op.apply(c * op.psi().values).abs().maxCoeff() <= 1e-10 * std::abs(c));
}

TEST_CASE("Fickian constant-coefficient action on a cosine") {
  auto g = make_uniform_grid(500);
  const double d0 = 0.7;
  auto op = make_op(g, 0.5, Eigen::ArrayXd::Constant(g->n, d0));
  Eigen::ArrayXd y(g->n), exact(g->n);
  for (int i = 0; i < g->n; ++i) {
    y[i] = std::cos(M_PI * g->nodes[i]);
    exact[i] = -d0 * M_PI * M_PI * y[i];
  }
  CHECK((op.apply(y) - exact).abs().maxCoeff() < 1e-3);

  // O(h^2): quarter the error when h halves
  auto g2 = make_uniform_grid(999);
  auto op2 = make_op(g2, 0.5, Eigen::ArrayXd::Constant(g2->n, d0));
  Eigen::ArrayXd y2(g2->n), exact2(g2->n);
  for (int i = 0; i < g2->n; ++i) {
    y2[i] = std::cos(M_PI * g2->nodes[i]);
    exact2[i] = -d0 * M_PI * M_PI * y2[i];
  }
  double e1 = (op.apply(y) - exact).abs().maxCoeff();
  double e2 = (op2.apply(y2) - exact2).abs().maxCoeff();
  CHECK(e2 < 0.3 * e1);
}

TEST_CASE("Fickian assembly is the classical three-point stencil") {
  auto g = make_uniform_grid(64);
  const double d0 = 1.3, h = g->h;
  auto op = make_op(g, 0.5, Eigen::ArrayXd::Constant(g->n, d0));
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(g->n, g->n);
  for (const auto& t : op.export_triplets()) L(t.row, t.col) += t.value;
  const double s = d0 / (h * h), tol = 1e-12 * s;
  for (int i = 1; i < g->n - 1; ++i) {
    CHECK(std::abs(L(i, i - 1) - s) < tol);
    CHECK(std::abs(L(i, i) + 2 * s) < tol);
    CHECK(std::abs(L(i, i + 1) - s) < tol);
  }
  CHECK(std::abs(L(0, 0) + 2 * s) < tol);
  CHECK(std::abs(L(0, 1) - 2 * s) < tol);
  CHECK(std::abs(L(g->n - 1, g->n - 2) - 2 * s) < tol);
}

TEST_CASE("triplets reproduce apply") {
  std::mt19937_64 rng(23);
  auto g = make_uniform_grid(60);
  auto op = make_op(g, 1.0, tu::smooth_positive(g, rng));
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(g->n, g->n);
  for (const auto& t : op.export_triplets()) L(t.row, t.col) += t.value;
  Eigen::ArrayXd y = tu::random_vector(g, rng);
  Eigen::ArrayXd via_mat = (L * y.matrix()).array();
  double scale = std::max(1.0, op.apply(y).abs().maxCoeff());
  CHECK((via_mat - op.apply(y)).abs().maxCoeff() < 1e-12 * scale);
}

TEST_CASE("conservation and self-adjointness") {
  std::mt19937_64 rng(29);
  auto g = make_uniform_grid(500);
  for (double theta : {0.0, 0.5, 1.0}) {
    auto op = make_op(g, theta, tu::smooth_positive(g, rng));
    for (int trial = 0; trial < 3; ++trial) {
      Eigen::ArrayXd y = random_smooth_field(g, rng, 4, 0.5);
      CHECK(std::abs(integrate_values(*g, op.apply(y))) < 1e-12);
      Eigen::ArrayXd u = random_smooth_field(g, rng, 4, 0.5);
      Eigen::ArrayXd v = random_smooth_field(g, rng, 4, 0.5);
      double lhs = op.inner_product_psi(u, op.apply(v));
      double rhs = op.inner_product_psi(op.apply(u), v);
      double scale = std::sqrt(integrate_values(*g, u.square())) *
                     std::sqrt(integrate_values(*g, v.square()));
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("flux endpoints are zero and stationary flux vanishes") {
  std::mt19937_64 rng(31);
  auto g = make_uniform_grid(200);
  {
    auto op = make_op(g, 0.75, tu::smooth_positive(g, rng));
    Eigen::ArrayXd y = tu::random_vector(g, rng);
    Eigen::ArrayXd J = op.flux(y);
    CHECK(J.size() == g->n + 1);
    CHECK(J[0] == 0.0);
    CHECK(J[g->n] == 0.0);
  }
  auto vr = available_volume(0.5, 0.5, g);
  auto op = OperatorAssembly(g, SpeciesDiffusion{1.0, vr.v});
  CHECK(op.flux(op.psi().values).abs().maxCoeff() == 0.0);
  CHECK(op.flux(4.2 * op.psi().values).abs().maxCoeff() < 1e-12);
}

TEST_CASE("Fickian flux of an affine profile is -d * slope") {
  auto g = make_uniform_grid(200);
  const double d0 = 0.9, b = 1.7;
  auto op = make_op(g, 0.5, Eigen::ArrayXd::Constant(g->n, d0));
  auto y = field_from_function(g, [&](double x) { return 0.3 + b * x; });
  Eigen::ArrayXd J = op.flux(y.values);
  for (int k = 1; k < g->n; ++k) CHECK(std::abs(J[k] + d0 * b) < 1e-12);
}

TEST_CASE("theta = 1: flux of the coefficient itself vanishes") {
  // y proportional to d is proportional to psi when theta = 1
  auto g = make_uniform_grid(200);
  auto vr = available_volume(0.5, 0.5, g);
  auto op = OperatorAssembly(g, SpeciesDiffusion{1.0, vr.v});
  CHECK(op.flux(vr.v.values).abs().maxCoeff() < 1e-12);
}

TEST_CASE("eigenvalue report: constant coefficient") {
  auto g = make_uniform_grid(500);
  const double d0 = 0.7;
  auto op = make_op(g, 0.5, Eigen::ArrayXd::Constant(g->n, d0));
  auto rep = op.eig_report();
  CHECK(rep.lambda_star == 9.869604401089358);
  CHECK(rep.lambda_bound == doctest::Approx(d0 * M_PI * M_PI).epsilon(1e-12));
  CHECK(rep.lambda_numeric == doctest::Approx(d0 * M_PI * M_PI).epsilon(0.01));
  CHECK(rep.zero_residual <= 1e-8 * std::max(1.0, std::abs(rep.lambda_numeric)));
  CHECK(rep.n == 500);
  CHECK(rep.theta == 0.5);
}

TEST_CASE("eigenvalue report: frozen oracle for volume-dependent transport") {
  // frozen value from an independent fine-grid tridiagonal eigensolve
  // (n = 4000, converged to ~1e-8 relative)
  const double oracle = 9.2378058102448009;
  auto g = make_uniform_grid(500);
  auto vr = available_volume(0.5, 0.5, g);
  auto rep = OperatorAssembly(g, SpeciesDiffusion{1.0, vr.v}).eig_report();
  CHECK(std::abs(rep.lambda_numeric - oracle) <= 0.02 * oracle);
  CHECK(rep.lambda_numeric >= rep.lambda_bound * (1.0 - 0.02));
}

TEST_CASE("spectral floor holds for random smooth coefficients") {
  std::mt19937_64 rng(37);
  const double thetas[4] = {0.0, 0.25, 0.5, 1.0};
  for (int trial = 0; trial < 12; ++trial) {
    auto g = make_uniform_grid(300);
    auto op = make_op(g, thetas[trial % 4], tu::smooth_positive(g, rng));
    auto rep = op.eig_report();
    CHECK(rep.lambda_numeric >= rep.lambda_bound * (1.0 - 0.02));
    CHECK(rep.zero_residual <= 1e-8 * std::max(1.0, std::abs(rep.lambda_numeric)));
  }
}

TEST_CASE("Rayleigh quotient of mean-free probes sits below the gap") {
  std::mt19937_64 rng(41);
  auto g = make_uniform_grid(300);
  auto op = make_op(g, 1.0, tu::smooth_positive(g, rng));
  double lam = op.second_eigenvalue_numeric();
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::ArrayXd y = tu::random_vector(g, rng);
    // project out the stationary direction: subtract psi * integral(y)
    y -= op.psi().values * integrate_values(*g, y);
    double q = op.inner_product_psi(y, op.apply(y)) / op.inner_product_psi(y, y);
    CHECK(q <= -lam * (1.0 - 1e-9));
  }
}
