// Uniform grid on [0,1], trapezoid quadrature, scalar fields and the
// sigmoidal available-volume profiles v_r(x) = exp(-r^2 * rho(x)).
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "rdcontract/errors.hpp"

namespace rdc {

struct SpatialGrid {
  int n = 0;             // number of nodes, >= 3
  double h = 0.0;        // spacing 1/(n-1)
  Eigen::ArrayXd nodes;  // nodes[i] = i/(n-1); nodes[0] = 0, nodes[n-1] = 1
  Eigen::ArrayXd quad_weights;  // trapezoid: h/2 at ends, h inside; sums to 1
};

using GridPtr = std::shared_ptr<const SpatialGrid>;

GridPtr make_uniform_grid(int n);

// Scalar field sampled at the grid nodes.
struct ScalarField {
  GridPtr grid;
  Eigen::ArrayXd values;

  ScalarField() = default;
  ScalarField(GridPtr g, Eigen::ArrayXd v);
  int size() const { return static_cast<int>(values.size()); }
};

ScalarField field_from_function(const GridPtr& g,
                                const std::function<double(double)>& f);
ScalarField constant_field(const GridPtr& g, double c);

// Trapezoid integral over (0,1) with compensated (Neumaier) summation.
double integrate(const ScalarField& f);
double integrate_values(const SpatialGrid& g, const Eigen::ArrayXd& v);
// Compensated sum of an arbitrary term sequence.
double neumaier_sum(const double* x, int n);

double l2_norm(const ScalarField& f);                 // sqrt(int f^2)
double l2_norm(const std::vector<ScalarField>& z);    // species-stacked L2
double mean_value(const ScalarField& f);              // == integrate on (0,1)

// rho(x) = 1 / (1 + exp(20*|x - x_star|)); v_r = exp(-r^2 * rho).
struct VolumeProfile {
  double r = 0.0;
  double x_star = 0.5;
  ScalarField rho;
  ScalarField v;
};

// Requires r >= 0 and 0 < x_star < 1. r = 0 returns the all-ones field.
VolumeProfile available_volume(double r, double x_star, const GridPtr& g);

// v / int(v); requires v > 0 everywhere. Idempotent up to rounding.
ScalarField normalize_profile(const ScalarField& v);

}  // namespace rdc
