#include "rdcontract/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rdc {
namespace {

// Max eigenvalue of sym(B) in the metric diag(m1, m2), closed form.
double sym_max_eig_2x2(double m1, double m2, const Eigen::Matrix2d& B) {
  const double a = B(0, 0);
  const double c = B(1, 1);
  const double b = (m1 * B(0, 1) + m2 * B(1, 0)) / (2.0 * std::sqrt(m1 * m2));
  const double mid = 0.5 * (a + c), gap = 0.5 * (a - c);
  return mid + std::sqrt(gap * gap + b * b);
}

}  // namespace

Example31 build_example_3_1(double epsilon, double omega, const GridPtr& grid) {
  if (!(epsilon > 0.0)) throw InvalidParameter("example 3.1 needs epsilon > 0");
  if (!(omega >= 0.0)) throw InvalidParameter("example 3.1 needs omega >= 0");
  Example31 ex;
  ex.epsilon = epsilon;
  ex.omega = omega;
  ex.d = epsilon / OperatorAssembly::lambda_star;
  ScalarField s = field_from_function(grid, [&](double x) { return std::sin(omega * x); });
  const double s_mean = integrate(s);
  ex.a = ScalarField(grid, -epsilon + s.values - s_mean);

  ReactionSpec reaction;
  reaction.species = 1;
  reaction.linear = true;
  reaction.space_varying = true;
  auto a_of = [epsilon, omega, s_mean](double x) {
    return -epsilon + std::sin(omega * x) - s_mean;
  };
  reaction.f = [a_of](double, double x, const double* z, double* out) {
    out[0] = a_of(x) * z[0];
  };
  reaction.jac = [a_of](double, double x, const double*, double* out) {
    out[0] = a_of(x);
  };
  std::vector<SpeciesDiffusion> diff{{0.5, constant_field(grid, ex.d)}};
  ex.system = make_system(grid, std::move(diff), std::move(reaction));
  return ex;
}

Example32 build_example_3_2(double zeta, double r, const GridPtr& grid) {
  if (!(zeta > 0.0)) throw InvalidParameter("example 3.2 needs zeta > 0");
  Example32 ex;
  ex.zeta = zeta;
  ex.r = r;
  ex.vr = available_volume(r, 0.5, grid);
  ex.nu = ex.vr.v.values.square().minCoeff() / ex.vr.v.values.maxCoeff();
  ex.A << -1.0, 1.0, -1.0, 0.5;

  ReactionSpec reaction;
  reaction.species = 2;
  reaction.linear = true;
  const Eigen::Matrix2d A = ex.A;
  reaction.f = [A](double, double, const double* z, double* out) {
    out[0] = A(0, 0) * z[0] + A(0, 1) * z[1];
    out[1] = A(1, 0) * z[0] + A(1, 1) * z[1];
  };
  reaction.jac = [A](double, double, const double*, double* out) {
    out[0] = A(0, 0);
    out[1] = A(0, 1);
    out[2] = A(1, 0);
    out[3] = A(1, 1);
  };
  const double pi2 = OperatorAssembly::lambda_star;
  std::vector<SpeciesDiffusion> diff;
  diff.push_back({0.5, constant_field(grid, 10.0 * zeta / pi2)});
  diff.push_back({1.0, ScalarField(grid, (zeta / (4.0 * pi2)) * ex.vr.v.values)});
  ex.system = make_system(grid, std::move(diff), std::move(reaction));
  return ex;
}

double compute_bcf(const ScalarField& vm, const ScalarField& vr) {
  if (vm.grid.get() != vr.grid.get())
    throw InvalidGrid("BCF profiles must share a grid");
  Eigen::ArrayXd prod = vm.values * vr.values;
  return integrate_values(*vm.grid, prod) / (integrate(vm) * integrate(vr));
}

double compute_bcf(const VolumeProfile& vm, const VolumeProfile& vr) {
  return compute_bcf(vm.v, vr.v);
}

Example32Certificate certify_example_3_2(double zeta, double r, const GridPtr& grid,
                                         const SamplingConfig& cfg) {
  Example32 ex = build_example_3_2(zeta, r, grid);
  Example32Certificate cert;
  cert.nu = ex.nu;
  cert.Lambda = Eigen::Vector2d(10.0 * zeta, 0.25 * zeta * ex.nu);
  cert.M1 << 7.0, -6.0, -6.0, 10.0;  // solves A^T M + M A = -2 I
  const Eigen::Matrix2d B = ex.A - Eigen::Matrix2d(cert.Lambda.asDiagonal());
  cert.stability = diagonal_stability_2x2(B);

  // Single metric weight valid at every node: maximize the worst-node margin
  // of sym(Gamma Psi^{-1}(x) B) over the diagonal ratio.
  ScalarField psi2 = psi_weight(1.0, ex.system.diffusion[1].d);
  auto worst_margin = [&](double s) {
    const double g1 = std::exp(s), g2 = std::exp(-s);
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid->n; ++i)
      m = std::min(m, -sym_max_eig_2x2(g1, g2 / psi2.values[i], B));
    return m;
  };
  double lo = -8.0, hi = 8.0, best_s = 0.0, best = -std::numeric_limits<double>::infinity();
  for (int round = 0; round < 4; ++round) {
    const int pts = 201;
    const double step = (hi - lo) / (pts - 1);
    for (int k = 0; k < pts; ++k) {
      const double s = lo + k * step;
      const double val = worst_margin(s);
      if (val > best) {
        best = val;
        best_s = s;
      }
    }
    lo = best_s - step;
    hi = best_s + step;
  }
  const Eigen::Vector2d gamma(std::exp(best_s), std::exp(-best_s));

  HierarchicalInputs in;
  in.mode = CertMode::Hierarchical1;
  in.grid = grid;
  in.diffusion = ex.system.diffusion;
  in.M1 = cert.M1;
  in.gamma = gamma;
  const Eigen::Matrix2d A = ex.A;
  in.jac_f1 = [A](const Eigen::VectorXd&) { return Eigen::MatrixXd(A); };
  in.wbar_box.lo = Eigen::Vector2d(-1.0, -1.0);
  in.wbar_box.hi = Eigen::Vector2d(1.0, 1.0);
  in.jac_f2 = [A](int, const Eigen::VectorXd&) { return Eigen::MatrixXd(A); };
  in.zperp_box = in.wbar_box;
  in.g1_integral = [A](const std::vector<ScalarField>& zperp) {
    Eigen::Vector2d means(integrate(zperp[0]), integrate(zperp[1]));
    return Eigen::VectorXd(A * means);
  };
  // The coupling that does exist: d g2 / d wbar = A Psi(x) - Psi(x) A_bar,
  // A_bar = A here since the averaged weight is the identity on integrals.
  Eigen::ArrayXd psi2v = psi2.values;
  in.cross_jac = [A, psi2v](int node, const Eigen::VectorXd&) {
    Eigen::Matrix2d Psi = Eigen::Vector2d(1.0, psi2v[node]).asDiagonal();
    return Eigen::MatrixXd(A * Psi - Psi * A);
  };
  in.cross_box = Box{};
  in.sampling = cfg;
  cert.report = certify_hierarchical(in);
  {
    std::ostringstream os;
    os << "metric weights gamma = (" << gamma[0] << ", " << gamma[1]
       << ") from worst-node ratio search; minors of the shifted matrix: "
       << cert.stability.minors[0] << ", " << cert.stability.minors[1] << ", "
       << cert.stability.minors[2];
    cert.report.notes.push_back(os.str());
  }
  return cert;
}

TranslationModel build_translation_model(const TranslationParams& p, const GridPtr& grid) {
  if (!(p.K > 0.0) || !(p.chi_m > 0.0) || !(p.chi_r > 0.0) || !(p.chi_c > 0.0) ||
      !(p.chi_scale > 0.0) || !(p.r_m >= 0.0) || !(p.r_r >= 0.0) ||
      !(p.m_bar_T >= 0.0) || !(p.R_bar_T >= 0.0) || !(p.C_star > 0.0))
    throw InvalidParameter("translation model parameters out of range");
  TranslationModel tm;
  tm.params = p;
  tm.vm = available_volume(p.r_m, p.x_star, grid);
  tm.vr = available_volume(p.r_r, p.x_star, grid);
  // Exact factorization of the complex profile: elementwise product, so the
  // identity v_c = v_m v_r used by the error dynamics holds bitwise.
  tm.vc = ScalarField(grid, tm.vm.v.values * tm.vr.v.values);
  tm.vm_hat = normalize_profile(tm.vm.v);
  tm.vr_hat = normalize_profile(tm.vr.v);
  tm.vc_hat = normalize_profile(tm.vc);
  tm.bcf = compute_bcf(tm.vm.v, tm.vr.v);

  ReactionSpec reaction;
  reaction.species = 3;
  const double K = p.K;
  reaction.f = [K](double, double, const double* z, double* out) {
    // One shared rate so the +/- pair cancels exactly in the conservation sums.
    const double rate = z[0] * z[1] / K - z[2];
    out[0] = -rate;
    out[1] = -rate;
    out[2] = rate;
  };
  reaction.jac = [K](double, double, const double* z, double* out) {
    const double dm = z[1] / K, dR = z[0] / K;
    out[0] = -dm; out[1] = -dR; out[2] = 1.0;
    out[3] = -dm; out[4] = -dR; out[5] = 1.0;
    out[6] = dm;  out[7] = dR;  out[8] = -1.0;
  };

  const double s = p.chi_scale;
  std::vector<SpeciesDiffusion> diff;
  diff.push_back({1.0, ScalarField(grid, s * p.chi_m * tm.vm.v.values)});
  diff.push_back({1.0, ScalarField(grid, s * p.chi_r * tm.vr.v.values)});
  diff.push_back({1.0, ScalarField(grid, s * p.chi_c * tm.vc.values)});
  tm.system = make_system(grid, std::move(diff), std::move(reaction),
                          /*nonnegative_states=*/true);
  return tm;
}

QssErrors qss_errors(const TranslationModel& model,
                     const std::vector<Eigen::ArrayXd>& state) {
  if (state.size() != 3) throw InvalidSpec("translation state needs 3 species");
  const GridPtr& g = model.system.grid;
  QssErrors q;
  q.m_bar = integrate_values(*g, state[0]);
  q.R_bar = integrate_values(*g, state[1]);
  q.c_bar = integrate_values(*g, state[2]);
  q.qss_target = model.bcf * q.m_bar * q.R_bar / model.params.K;
  q.e_bar = q.c_bar - q.qss_target;
  q.m_perp = ScalarField(g, state[0] - model.vm_hat.values * q.m_bar);
  q.R_perp = ScalarField(g, state[1] - model.vr_hat.values * q.R_bar);
  q.c_perp = ScalarField(g, state[2] - model.vc_hat.values * q.c_bar);
  q.m_perp_norm = l2_norm(q.m_perp);
  q.R_perp_norm = l2_norm(q.R_perp);
  q.c_perp_norm = l2_norm(q.c_perp);
  return q;
}

TranslationBounds invariant_set_bounds(const TranslationModel& model,
                                       const std::vector<Eigen::ArrayXd>* initial) {
  const TranslationParams& p = model.params;
  TranslationBounds b;
  b.vm_max = model.vm.v.values.maxCoeff();
  b.vm_min = model.vm.v.values.minCoeff();
  b.vr_max = model.vr.v.values.maxCoeff();
  b.vr_min = model.vr.v.values.minCoeff();
  b.vc_max = model.vc.values.maxCoeff();
  b.vc_min = model.vc.values.minCoeff();
  b.vm_hat_max = model.vm_hat.values.maxCoeff();
  b.vr_hat_max = model.vr_hat.values.maxCoeff();
  b.psi_max = std::max({model.vm_hat.values.maxCoeff(), model.vr_hat.values.maxCoeff(),
                        model.vc_hat.values.maxCoeff()});
  b.psi_min = std::min({model.vm_hat.values.minCoeff(), model.vr_hat.values.minCoeff(),
                        model.vc_hat.values.minCoeff()});

  if (initial) {
    if (initial->size() != 3) throw InvalidSpec("initial state needs 3 species");
    Eigen::ArrayXd wsum = (b.vm_max / b.vm_min) * (*initial)[0] +
                          (b.vr_max / b.vr_min) * (*initial)[1] +
                          (b.vc_max / b.vc_min) * (*initial)[2];
    b.ic_weighted_sup = wsum.maxCoeff();
    if (b.ic_weighted_sup > p.C_star)
      throw InvalidInvariantSet("initial weighted sup " +
                                std::to_string(b.ic_weighted_sup) +
                                " exceeds C* = " + std::to_string(p.C_star));
  }

  b.m_star = p.C_star * b.vm_max / b.vm_min;
  b.R_star = p.C_star * b.vr_max / b.vr_min;
  b.m_perp_star = std::max(b.vm_hat_max * p.m_bar_T, b.m_star);
  b.R_perp_star = std::max(b.vr_hat_max * p.R_bar_T, b.R_star);
  b.eta_max = 1.0 + model.bcf * (p.m_bar_T + p.R_bar_T) / p.K;

  const double um = b.vm_hat_max * p.m_bar_T + 0.5 * b.m_perp_star;
  const double ur = b.vr_hat_max * p.R_bar_T + 0.5 * b.R_perp_star;
  b.beta_u = std::sqrt(um * um + ur * ur + 1.0);

  const GridPtr& g = model.system.grid;
  Eigen::ArrayXd eta_terms =
      ((model.vr_hat.values - 1.0) * p.R_bar_T + 0.5 * b.R_perp_star).square() +
      ((model.vm_hat.values - 1.0) * p.m_bar_T + 0.5 * b.m_perp_star).square();
  b.beta_u_eta =
      std::sqrt(b.eta_max * integrate_values(*g, eta_terms)) / p.K;
  Eigen::ArrayXd h_terms = (model.vr_hat.values - 1.0).square() +
                           (model.vm_hat.values - 1.0).square();
  b.beta_h = std::sqrt(integrate_values(*g, h_terms)) / model.bcf;
  return b;
}

CertificateReport translation_certificate(const TranslationModel& model,
                                          const TranslationBounds& b) {
  CertificateReport rep;
  rep.mode = CertMode::FullTheorem;
  rep.m1_star = 1.0;
  rep.m2_star = 1.0;

  Eigen::Vector3d Lambda;
  for (int s = 0; s < 3; ++s) {
    OperatorAssembly op(model.system.grid, model.system.diffusion[s]);
    Lambda[s] = op.lambda_bound();
  }
  const double lambda_floor = Lambda.minCoeff();
  const double psi_ratio = std::sqrt(3.0 * b.psi_max / b.psi_min);

  rep.lambda1 = 1.0;  // averaged error dynamics: eta(t) >= 1 times -e_bar
  rep.lambda2 = lambda_floor - psi_ratio * b.beta_u;
  rep.beta = b.beta_u_eta + b.beta_h;
  const SmallGain sg = small_gain(rep.lambda1, rep.lambda2, rep.beta, 1.0, 1.0);
  rep.sigma = sg.sigma;
  rep.condition_pass[0] = true;
  rep.condition_pass[1] = rep.lambda2 > 0.0;
  rep.condition_pass[2] = std::isfinite(rep.beta);
  rep.condition_pass[3] = sg.pass;
  Eigen::VectorXd none;
  rep.worst[0] = {rep.lambda1, std::nan(""), none, "averaged QSS-error margin"};
  rep.worst[1] = {rep.lambda2, std::nan(""), none,
                  "transport floor minus weighted input gain"};
  rep.worst[2] = {rep.beta * rep.beta, std::nan(""), none,
                  "coupling gain squared (beta_u_eta + beta_h)^2"};
  rep.worst[3] = {rep.lambda1 * rep.lambda2 - rep.sigma * rep.sigma, std::nan(""),
                  none, "small-gain slack lambda1*lambda2 - sigma^2"};
  rep.lambda_star = rep.certified() ? sg.lambda_star : std::nan("");

  std::ostringstream os;
  os << "transport floors per species: " << Lambda[0] << ", " << Lambda[1] << ", "
     << Lambda[2] << "; sqrt(3 psi_max/psi_min) = " << psi_ratio;
  rep.notes.push_back(os.str());
  std::ostringstream os2;
  os2 << "beta_u = " << b.beta_u << ", beta_u_eta = " << b.beta_u_eta
      << ", beta_h = " << b.beta_h << ", eta_max = " << b.eta_max;
  rep.notes.push_back(os2.str());
  std::ostringstream os3;
  os3 << "condition 4 uses sigma = beta/2 (unit metric floors) as in the "
         "source analysis; the psi-weighted floor would be m2* = "
      << 1.0 / b.psi_max << " and tightens sigma by "
      << std::sqrt(b.psi_max);
  rep.notes.push_back(os3.str());
  return rep;
}

InvariantCheck check_invariant_set(const TranslationModel& model,
                                   const Trajectory& traj) {
  InvariantCheck c;
  c.c_star = model.params.C_star;
  TranslationBounds b = invariant_set_bounds(model);
  c.min_concentration = std::numeric_limits<double>::infinity();
  c.max_weighted_sum = -std::numeric_limits<double>::infinity();
  for (const auto& state : traj.states) {
    for (const auto& z : state)
      c.min_concentration = std::min(c.min_concentration, z.minCoeff());
    Eigen::ArrayXd wsum = (b.vm_min / b.vm_max) * state[0] +
                          (b.vr_min / b.vr_max) * state[1] +
                          (b.vc_min / b.vc_max) * state[2];
    c.max_weighted_sum = std::max(c.max_weighted_sum, wsum.maxCoeff());
  }
  c.ok = c.min_concentration >= -1e-9 && c.max_weighted_sum <= c.c_star + 1e-9;
  return c;
}

}  // namespace rdc
