// Built-in example systems: the scalar shear benchmark, the 2-species
// cross-activation system with volume-dependent transport, and the 3-species
// mRNA/ribosome/complex translation model with its binding correction factor,
// conservation structure, QSS error variables, invariant-set bounds and
// contraction certificate constants.
#pragma once

#include <Eigen/Core>
#include <vector>

#include "rdcontract/certificates.hpp"
#include "rdcontract/simulate.hpp"

namespace rdc {

// Scalar dz/dt = (eps/pi^2) z'' + a(x) z with
// a(x) = -eps + sin(omega x) - mean(sin(omega x)); mean(a) = -eps by
// construction (the subtracted mean is the grid quadrature value).
struct Example31 {
  RDSystem system;
  ScalarField a;
  double epsilon = 0.0, omega = 0.0, d = 0.0;
};
Example31 build_example_3_1(double epsilon, double omega, const GridPtr& grid);

// Two-species linear system, A = [[-1,1],[-1,1/2]]; species 1 Fickian with
// d = 10 zeta / pi^2, species 2 theta = 1 with d = (zeta/4pi^2) v_r(x).
struct Example32 {
  RDSystem system;
  VolumeProfile vr;
  double zeta = 0.0, r = 0.0;
  double nu = 0.0;  // min v_r^2 / max v_r
  Eigen::Matrix2d A;
};
Example32 build_example_3_2(double zeta, double r, const GridPtr& grid);

// Binding correction factor: integral(vm*vr) / (integral(vm)*integral(vr)).
double compute_bcf(const VolumeProfile& vm, const VolumeProfile& vr);
double compute_bcf(const ScalarField& vm, const ScalarField& vr);

struct Example32Certificate {
  DiagonalStability2x2 stability;  // minors arithmetic on A - Lambda
  CertificateReport report;        // one-way-coupling certificate, metric search
  double nu = 0.0;
  Eigen::Vector2d Lambda;
  Eigen::Matrix2d M1;
};
Example32Certificate certify_example_3_2(double zeta, double r, const GridPtr& grid,
                                         const SamplingConfig& cfg = SamplingConfig{});

struct TranslationParams {
  double K = 1.0;          // dissociation constant
  double chi_m = 1.0;      // normalized mRNA diffusivity
  double chi_r = 10.0;     // normalized ribosome diffusivity
  double chi_c = 1.0;      // normalized complex diffusivity
  double chi_scale = 1.0;  // common multiplier on all three chi's
  double r_m = 0.4, r_r = 0.2;  // gyration radii (complex radius from factorization)
  double x_star = 0.5;
  double m_bar_T = 1.0, R_bar_T = 1.0;  // conserved totals
  double C_star = 4.0;                  // invariant-set size
};

struct TranslationModel {
  RDSystem system;  // species order: m, R, c_r
  VolumeProfile vm, vr;
  ScalarField vc;  // product vm*vr pointwise (exact factorization)
  ScalarField vm_hat, vr_hat, vc_hat;
  TranslationParams params;
  double bcf = 1.0;
};
TranslationModel build_translation_model(const TranslationParams& p, const GridPtr& grid);

struct QssErrors {
  double e_bar = 0.0;       // c_bar - bcf * m_bar * R_bar / K
  double qss_target = 0.0;  // bcf * m_bar * R_bar / K
  double m_bar = 0.0, R_bar = 0.0, c_bar = 0.0;
  double m_perp_norm = 0.0, R_perp_norm = 0.0, c_perp_norm = 0.0;
  ScalarField m_perp, R_perp, c_perp;
};
QssErrors qss_errors(const TranslationModel& model,
                     const std::vector<Eigen::ArrayXd>& state);

struct TranslationBounds {
  double vm_max = 0, vm_min = 0, vr_max = 0, vr_min = 0, vc_max = 0, vc_min = 0;
  double vm_hat_max = 0, vr_hat_max = 0;
  double psi_max = 0, psi_min = 0;  // over species and nodes of the null weights
  double m_star = 0, R_star = 0;          // pointwise concentration bounds
  double m_perp_star = 0, R_perp_star = 0;  // deviation bounds
  double eta_max = 0;                       // 1 + bcf (m_T + R_T)/K
  double beta_u = 0, beta_u_eta = 0, beta_h = 0;
  double ic_weighted_sup = 0;  // only when an initial state was supplied
};
// Throws InvalidInvariantSet when an initial state is supplied whose weighted
// sup exceeds C_star.
TranslationBounds invariant_set_bounds(const TranslationModel& model,
                                       const std::vector<Eigen::ArrayXd>* initial = nullptr);

CertificateReport translation_certificate(const TranslationModel& model,
                                          const TranslationBounds& b);

struct InvariantCheck {
  double min_concentration = 0.0;
  double max_weighted_sum = 0.0;
  double c_star = 0.0;
  bool ok = false;
};
InvariantCheck check_invariant_set(const TranslationModel& model, const Trajectory& traj);

}  // namespace rdc
