#include "rdcontract/grid.hpp"

#include <cmath>

namespace rdc {

GridPtr make_uniform_grid(int n) {
  if (n < 3) throw InvalidGrid("grid needs at least 3 nodes, got " + std::to_string(n));
  auto g = std::make_shared<SpatialGrid>();
  g->n = n;
  g->h = 1.0 / (n - 1);
  g->nodes.resize(n);
  for (int i = 0; i < n; ++i) g->nodes[i] = double(i) / double(n - 1);
  g->quad_weights = Eigen::ArrayXd::Constant(n, g->h);
  g->quad_weights[0] = 0.5 * g->h;
  g->quad_weights[n - 1] = 0.5 * g->h;
  // Nudge one weight so the weights sum to exactly 1.0; keeps integrals of
  // constants (and ratios of them) free of spurious last-ulp drift.
  double s = neumaier_sum(g->quad_weights.data(), n);
  g->quad_weights[n / 2] -= (s - 1.0);
  return g;
}

ScalarField::ScalarField(GridPtr g, Eigen::ArrayXd v) : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw InvalidGrid("field constructed without a grid");
  if (values.size() != grid->n)
    throw InvalidGrid("field length " + std::to_string(values.size()) +
                      " does not match grid size " + std::to_string(grid->n));
}

ScalarField field_from_function(const GridPtr& g, const std::function<double(double)>& f) {
  Eigen::ArrayXd v(g->n);
  for (int i = 0; i < g->n; ++i) v[i] = f(g->nodes[i]);
  return ScalarField(g, std::move(v));
}

ScalarField constant_field(const GridPtr& g, double c) {
  return ScalarField(g, Eigen::ArrayXd::Constant(g->n, c));
}

double neumaier_sum(const double* x, int n) {
  double s = 0.0, c = 0.0;
  for (int i = 0; i < n; ++i) {
    double t = s + x[i];
    if (std::abs(s) >= std::abs(x[i]))
      c += (s - t) + x[i];
    else
      c += (x[i] - t) + s;
    s = t;
  }
  return s + c;
}

double integrate_values(const SpatialGrid& g, const Eigen::ArrayXd& v) {
  if (v.size() != g.n) throw InvalidGrid("integrand length does not match grid");
  Eigen::ArrayXd terms = g.quad_weights * v;
  return neumaier_sum(terms.data(), g.n);
}

double integrate(const ScalarField& f) { return integrate_values(*f.grid, f.values); }

double l2_norm(const ScalarField& f) {
  return std::sqrt(integrate_values(*f.grid, f.values.square()));
}

double l2_norm(const std::vector<ScalarField>& z) {
  double s = 0.0;
  for (const auto& f : z) s += integrate_values(*f.grid, f.values.square());
  return std::sqrt(s);
}

double mean_value(const ScalarField& f) { return integrate(f); }

VolumeProfile available_volume(double r, double x_star, const GridPtr& g) {
  if (!(r >= 0.0)) throw InvalidParameter("available_volume: r must be >= 0");
  if (!(x_star > 0.0 && x_star < 1.0))
    throw InvalidParameter("available_volume: x_star must lie strictly inside (0,1)");
  VolumeProfile p;
  p.r = r;
  p.x_star = x_star;
  Eigen::ArrayXd rho(g->n), v(g->n);
  for (int i = 0; i < g->n; ++i) {
    rho[i] = 1.0 / (1.0 + std::exp(20.0 * std::abs(g->nodes[i] - x_star)));
    v[i] = (r == 0.0) ? 1.0 : std::exp(-r * r * rho[i]);
  }
  p.rho = ScalarField(g, std::move(rho));
  p.v = ScalarField(g, std::move(v));
  return p;
}

ScalarField normalize_profile(const ScalarField& v) {
  if ((v.values <= 0.0).any()) throw InvalidProfile("normalize_profile: profile must be positive");
  double z = integrate(v);
  return ScalarField(v.grid, v.values / z);
}

}  // namespace rdc
