#include "rdcontract/operators.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

namespace rdc {

ScalarField psi_weight(double theta, const ScalarField& d) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw InvalidSpec("psi_weight: theta must lie in [0,1]");
  if ((d.values <= 0.0).any())
    throw InvalidSpec("psi_weight: diffusion coefficient must be strictly positive");
  Eigen::ArrayXd q = d.values.pow(2.0 * theta - 1.0);
  ScalarField qf(d.grid, std::move(q));
  return normalize_profile(qf);
}

OperatorAssembly::OperatorAssembly(GridPtr grid, SpeciesDiffusion diff)
    : grid_(std::move(grid)), theta_(diff.theta), d_(std::move(diff.d)) {
  if (!grid_) throw InvalidGrid("operator assembly needs a grid");
  if (d_.grid.get() != grid_.get())
    throw InvalidGrid("diffusion coefficient lives on a different grid");
  if (!(theta_ >= 0.0 && theta_ <= 1.0))
    throw InvalidSpec("theta must lie in [0,1]");
  if ((d_.values <= 0.0).any())
    throw InvalidSpec("diffusion coefficient must be strictly positive");

  const int n = grid_->n;
  const double h = grid_->h;

  Eigen::ArrayXd q = d_.values.pow(2.0 * theta_ - 1.0);
  const double Z = integrate_values(*grid_, q);
  psi_ = ScalarField(grid_, q / Z);

  a_edge_.resize(n - 1);
  for (int k = 0; k < n - 1; ++k)
    a_edge_[k] = std::pow(std::sqrt(d_.values[k] * d_.values[k + 1]), 2.0 * theta_) / Z;

  alpha_.resize(n - 1);
  beta_.resize(n - 1);
  for (int k = 0; k < n - 1; ++k) {
    alpha_[k] = (a_edge_[k] / h) / psi_.values[k];
    beta_[k] = (a_edge_[k] / h) / psi_.values[k + 1];
  }

  const double min_d2t = d_.values.pow(2.0 * theta_).minCoeff();
  const double max_q = d_.values.pow(2.0 * theta_ - 1.0).maxCoeff();
  lambda_bound_ = lambda_star * min_d2t / max_q;
}

Eigen::ArrayXd OperatorAssembly::apply(const Eigen::ArrayXd& y) const {
  const int n = grid_->n;
  if (y.size() != n) throw InvalidGrid("apply: state length does not match grid");
  const long double h = grid_->h;
  // Difference the psi-relative density so y proportional to psi gives an
  // exactly constant g and hence exactly zero fluxes.
  std::vector<long double> g(n);
  for (int i = 0; i < n; ++i) g[i] = (long double)y[i] / (long double)psi_.values[i];
  Eigen::ArrayXd out(n);
  long double j_prev = 0.0L;  // zero-flux left end
  for (int i = 0; i < n; ++i) {
    long double j_next = 0.0L;  // zero-flux right end
    if (i < n - 1) j_next = -((long double)a_edge_[i] / h) * (g[i + 1] - g[i]);
    out[i] = (double)((j_prev - j_next) / (long double)grid_->quad_weights[i]);
    j_prev = j_next;
  }
  return out;
}

Eigen::ArrayXd OperatorAssembly::flux(const Eigen::ArrayXd& y) const {
  const int n = grid_->n;
  if (y.size() != n) throw InvalidGrid("flux: state length does not match grid");
  Eigen::ArrayXd j = Eigen::ArrayXd::Zero(n + 1);
  for (int k = 0; k < n - 1; ++k) {
    long double gk = (long double)y[k] / (long double)psi_.values[k];
    long double gk1 = (long double)y[k + 1] / (long double)psi_.values[k + 1];
    j[k + 1] = (double)(-((long double)a_edge_[k] / (long double)grid_->h) * (gk1 - gk));
  }
  return j;
}

double OperatorAssembly::inner_product_psi(const Eigen::ArrayXd& u,
                                           const Eigen::ArrayXd& v) const {
  if (u.size() != grid_->n || v.size() != grid_->n)
    throw InvalidGrid("inner_product_psi: length mismatch");
  Eigen::ArrayXd integrand = u * v / psi_.values;
  return integrate_values(*grid_, integrand);
}

double OperatorAssembly::second_eigenvalue_numeric() const {
  return eig_report().lambda_numeric;
}

EigReport OperatorAssembly::eig_report() const {
  const int n = grid_->n;
  const double h = grid_->h;
  // K is the psi^{-1}-weighted stiffness form: <u, L v>_psi = u^T K v with
  // K_{k,k+1} = -a_k/(h psi_k psi_{k+1}), K_kk = (a_{k-1} + a_k)/(h psi_k^2),
  // and M_k = w_k / psi_k the diagonal mass.  T = M^{-1/2} K M^{-1/2} is a
  // symmetric tridiagonal sharing L's spectrum.
  std::vector<double> diag(n), off(n - 1);
  const auto& w = grid_->quad_weights;
  const auto& p = psi_.values;
  for (int i = 0; i < n; ++i) {
    double kii = 0.0;
    if (i > 0) kii += a_edge_[i - 1] / h;
    if (i < n - 1) kii += a_edge_[i] / h;
    kii /= p[i] * p[i];
    diag[i] = kii / (w[i] / p[i]);
  }
  for (int k = 0; k < n - 1; ++k) {
    double kod = -a_edge_[k] / (h * p[k] * p[k + 1]);
    off[k] = kod / std::sqrt((w[k] / p[k]) * (w[k + 1] / p[k + 1]));
  }
  std::vector<double> zdummy(1);
  lapack_int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'N', n, diag.data(), off.data(),
                                  zdummy.data(), 1);
  if (info != 0)
    throw NumericalFailure("dstev failed with info=" + std::to_string((long)info));
  std::sort(diag.begin(), diag.end());
  EigReport r;
  r.theta = theta_;
  r.n = n;
  r.lambda_bound = lambda_bound_;
  r.lambda_numeric = diag[1];
  r.zero_residual = std::abs(diag[0]);
  r.lambda_star = lambda_star;
  if (r.zero_residual > 1e-8 * std::max(1.0, std::abs(diag[1])))
    throw NumericalFailure("zero-flux null eigenvalue missing: residual " +
                           std::to_string(r.zero_residual));
  return r;
}

std::vector<OperatorAssembly::Triplet> OperatorAssembly::export_triplets() const {
  const int n = grid_->n;
  const auto& w = grid_->quad_weights;
  std::vector<Triplet> t;
  t.reserve(3 * n);
  for (int i = 0; i < n; ++i) {
    double dii = 0.0;
    if (i > 0) {
      dii += beta_[i - 1];
      t.push_back({i, i - 1, alpha_[i - 1] / w[i]});
    }
    if (i < n - 1) {
      dii += alpha_[i];
      t.push_back({i, i + 1, beta_[i] / w[i]});
    }
    t.push_back({i, i, -dii / w[i]});
  }
  return t;
}

}  // namespace rdc
