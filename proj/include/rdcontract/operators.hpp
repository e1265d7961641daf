// Discrete transport operator for one species on the unit interval with
// zero-flux ends.  The flux is J = -d^{2theta} grad(d^{1-2theta} y); the
// stationary density psi = d^{2theta-1} / integral(d^{2theta-1}) is the exact
// null vector of the assembled operator, not just an O(h^2) approximation:
// the scheme differences y/psi, so y = psi maps to the zero vector bitwise.
#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "rdcontract/grid.hpp"

namespace rdc {

struct SpeciesDiffusion {
  double theta = 0.5;   // drift exponent; 0.5 = plain Fickian
  ScalarField d;        // diffusion coefficient, strictly positive
};

// psi = d^{2theta-1} normalized to unit integral.
ScalarField psi_weight(double theta, const ScalarField& d);

struct EigReport {
  double theta = 0.0;
  int n = 0;
  double lambda_bound = 0.0;    // pi^2 min(d^{2theta}) / max(d^{2theta-1})
  double lambda_numeric = 0.0;  // second-smallest eigenvalue of the assembly
  double zero_residual = 0.0;   // |smallest eigenvalue| (should be ~0)
  double lambda_star = 0.0;     // pi^2, the constant-coefficient reference gap
};

class OperatorAssembly {
 public:
  OperatorAssembly(GridPtr grid, SpeciesDiffusion diff);

  const GridPtr& grid() const { return grid_; }
  double theta() const { return theta_; }
  const ScalarField& d() const { return d_; }
  const ScalarField& psi() const { return psi_; }

  // pi^2 min_x d^{2theta} / max_x d^{2theta-1}, evaluated over grid nodes.
  double lambda_bound() const { return lambda_bound_; }
  static constexpr double lambda_star = 9.869604401089358;  // pi^2

  // L y at the nodes.  Interior: (J_{k-1} - J_k)/w_i with edge fluxes
  // J_k = -(a_k/h)(y_{k+1}/psi_{k+1} - y_k/psi_k); boundary fluxes are zero.
  Eigen::ArrayXd apply(const Eigen::ArrayXd& y) const;

  // Edge fluxes, n+1 values; entries 0 and n are exactly 0.
  Eigen::ArrayXd flux(const Eigen::ArrayXd& y) const;

  // Off-diagonal action coefficients of L as a matrix: for interior edge k
  // (between nodes k and k+1), alpha_k = (a_k/h)/psi_k feeds node k+1 and
  // beta_k = (a_k/h)/psi_{k+1} feeds node k.  Used by the implicit stepper.
  const Eigen::ArrayXd& edge_alpha() const { return alpha_; }
  const Eigen::ArrayXd& edge_beta() const { return beta_; }

  // <u, v>_psi = integral u psi^{-1} v; L is self-adjoint in this product.
  double inner_product_psi(const Eigen::ArrayXd& u, const Eigen::ArrayXd& v) const;

  // Second-smallest eigenvalue of L restricted to the zero-flux problem,
  // computed from the symmetrized tridiagonal form.  Also fills the report.
  double second_eigenvalue_numeric() const;
  EigReport eig_report() const;

  // Sparse (row, col, value) triplets of the full operator matrix.
  struct Triplet {
    int row, col;
    double value;
  };
  std::vector<Triplet> export_triplets() const;

 private:
  GridPtr grid_;
  double theta_;
  ScalarField d_;
  ScalarField psi_;
  Eigen::ArrayXd a_edge_;  // a_k = geom-mean(d_k, d_{k+1})^{2theta} / Z, n-1 values
  Eigen::ArrayXd alpha_, beta_;
  double lambda_bound_ = 0.0;
};

}  // namespace rdc
