// Acceptance gate: twelve numbered checks, one pass/fail line each.  Exit
// status is nonzero if any check fails.  Tolerances and budgets are pinned
// here, not configurable; the output of each line carries the measured
// quantities so a failure is diagnosable from the log alone.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rdcontract/certificates.hpp"
#include "rdcontract/errors.hpp"
#include "rdcontract/grid.hpp"
#include "rdcontract/models.hpp"
#include "rdcontract/operators.hpp"
#include "rdcontract/simulate.hpp"

using namespace rdc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void report(int idx, const char* name, const Outcome& o) {
  std::printf("[%s] criterion %d: %s (%s)\n", o.pass ? "PASS" : "FAIL", idx, name,
              o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++g_failures;
}

Outcome guarded(const std::function<Outcome()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

// ---- shared randomized operator specs (criteria 1-3) -----------------------

// 20 cases: theta cycles {0, 0.25, 0.5, 1}, d = exp of a 4-mode cosine series
// with coefficients U(-0.4, 0.4) (smooth, strictly positive, zero-flux ends).
std::vector<OperatorAssembly>& tested_specs() {
  static std::vector<OperatorAssembly> specs = [] {
    std::vector<OperatorAssembly> v;
    auto g = make_uniform_grid(500);
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> uni(-0.4, 0.4);
    const double thetas[4] = {0.0, 0.25, 0.5, 1.0};
    for (int i = 0; i < 20; ++i) {
      Eigen::ArrayXd logd = Eigen::ArrayXd::Constant(g->n, uni(rng));
      for (int k = 1; k <= 4; ++k)
        logd += (uni(rng) / k) * (k * M_PI * g->nodes).cos();
      v.emplace_back(g, SpeciesDiffusion{thetas[i % 4], ScalarField(g, logd.exp())});
    }
    return v;
  }();
  return specs;
}

// ---- criterion 1: spectral floor ------------------------------------------

Outcome crit1_eigen_floor() {
  constexpr double kRelSlack = 0.98;
  constexpr double kBudgetSec = 30.0;
  const auto t0 = std::chrono::steady_clock::now();
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (const auto& op : tested_specs()) {
    const double numeric = op.second_eigenvalue_numeric();
    worst_ratio = std::min(worst_ratio, numeric / op.lambda_bound());
  }
  const double dt = seconds_since(t0);
  const bool pass = worst_ratio >= kRelSlack && dt <= kBudgetSec;
  return {pass, "20 specs at n=500, worst lambda_numeric/bound = " + fmt(worst_ratio, 8) +
                    " (need >= 0.98), " + fmt(dt, 3) + " s"};
}

// ---- criterion 2: null space and conservation ------------------------------

Outcome crit2_null_and_conservation() {
  constexpr double kNullTol = 1e-10;
  constexpr double kConsTol = 1e-12;
  std::mt19937_64 rng(7151);
  double worst_null = 0.0, worst_cons = 0.0;
  for (const auto& op : tested_specs()) {
    worst_null = std::max(worst_null, op.apply(op.psi().values).abs().maxCoeff());
    for (int p = 0; p < 3; ++p) {
      Eigen::ArrayXd y = random_smooth_field(op.grid(), rng, 4, 0.5);
      const double total = integrate_values(*op.grid(), op.apply(y));
      worst_cons = std::max(worst_cons, std::abs(total));
    }
  }
  const bool pass = worst_null <= kNullTol && worst_cons <= kConsTol;
  return {pass, "max |L psi| = " + fmt(worst_null, 3) + " (tol 1e-10), max |int L y| = " +
                    fmt(worst_cons, 3) + " (tol 1e-12), 60 probes"};
}

// ---- criterion 3: weighted self-adjointness --------------------------------

Outcome crit3_self_adjoint() {
  constexpr double kTol = 1e-10;
  std::mt19937_64 rng(9203);
  double worst_rel = 0.0;
  for (const auto& op : tested_specs()) {
    Eigen::ArrayXd u = random_smooth_field(op.grid(), rng, 4, 0.5);
    Eigen::ArrayXd v = random_smooth_field(op.grid(), rng, 4, 0.5);
    const double lhs = op.inner_product_psi(u, op.apply(v));
    const double rhs = op.inner_product_psi(op.apply(u), v);
    const double scale = l2_norm(ScalarField(op.grid(), u)) *
                         l2_norm(ScalarField(op.grid(), v));
    worst_rel = std::max(worst_rel, std::abs(lhs - rhs) / scale);
  }
  return {worst_rel <= kTol,
          "max |<u,Lv> - <Lu,v>| / (|u||v|) = " + fmt(worst_rel, 3) + " (tol 1e-10)"};
}

// ---- criterion 4: shear-example sweep locates the instability onset --------

Outcome crit4_omega_sweep() {
  constexpr double kLo = 0.15, kHi = 0.6;
  constexpr double kBudgetSec = 300.0;
  const auto t0 = std::chrono::steady_clock::now();
  auto g = make_uniform_grid(500);
  SlopeProtocol proto;
  proto.t_end = 100.0;
  proto.dt = 0.02;
  proto.t_lo = 80.0;
  proto.t_hi = 100.0;
  proto.sample_every = 10;
  proto.ic = ic_uniform_one;

  const int steps = 11;
  std::vector<double> omegas(steps), slopes(steps);
  for (int i = 0; i < steps; ++i)
    omegas[i] = 1e-3 * std::pow(1.0 / 1e-3, double(i) / (steps - 1));
  for (int i = 0; i < steps; ++i) {
    Example31 ex = build_example_3_1(1e-2, omegas[i], g);
    slopes[i] = measured_slope(ex.system, proto);
  }
  const double dt = seconds_since(t0);

  int flip = -1;
  for (int i = 0; i + 1 < steps; ++i)
    if (slopes[i] < 0.0 && slopes[i + 1] > 0.0) {
      flip = i;
      break;
    }
  if (flip < 0) return {false, "no slope sign change across the 11-point sweep"};
  const double omega_cr = std::sqrt(omegas[flip] * omegas[flip + 1]);
  const bool pass = omega_cr >= kLo && omega_cr <= kHi && dt <= kBudgetSec;
  return {pass, "sign change in [" + fmt(omegas[flip], 4) + ", " +
                    fmt(omegas[flip + 1], 4) + "], omega_cr ~ " + fmt(omega_cr, 4) +
                    ", required window [0.15, 0.6], " + fmt(dt, 3) + " s"};
}

// ---- criterion 5: closed-form scalar boundary + soundness -------------------

Outcome crit5_small_omega_boundary() {
  constexpr double kEps = 1e-2;
  constexpr double kTol = 1e-6;
  const double expected = (std::sqrt(33.0) - 3.0) * kEps;

  double lo = 0.01, hi = 0.05;  // certified at lo, not certified at hi
  if (!certify_scalar_small_omega(kEps, lo).certified() ||
      certify_scalar_small_omega(kEps, hi).certified())
    return {false, "bisection bracket invalid"};
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (certify_scalar_small_omega(kEps, mid).certified() ? lo : hi) = mid;
  }
  const double boundary = 0.5 * (lo + hi);

  // every certified probe must also be empirically stable
  auto g = make_uniform_grid(300);
  SlopeProtocol proto;
  proto.t_end = 60.0;
  proto.dt = 0.02;
  proto.t_lo = 40.0;
  proto.t_hi = 60.0;
  proto.sample_every = 10;
  proto.ic = ic_uniform_one;
  int n_cert = 0;
  double worst_cert_slope = -std::numeric_limits<double>::infinity();
  bool sound = true;
  for (int i = 0; i < 10; ++i) {
    const double omega = 0.005 * std::pow(100.0, double(i) / 9.0);
    if (!certify_scalar_small_omega(kEps, omega).certified()) continue;
    ++n_cert;
    const double s = measured_slope(build_example_3_1(kEps, omega, g).system, proto);
    worst_cert_slope = std::max(worst_cert_slope, s);
    if (!(s < 0.0)) sound = false;
  }
  const bool pass = std::abs(boundary - expected) <= kTol && n_cert > 0 && sound;
  return {pass, "boundary = " + fmt(boundary, 10) + " vs (sqrt(33)-3)*1e-2 = " +
                    fmt(expected, 10) + ", |diff| = " + fmt(std::abs(boundary - expected), 3) +
                    " (tol 1e-6); " + std::to_string(n_cert) +
                    " certified probes all stable, worst slope = " + fmt(worst_cert_slope, 4)};
}

// ---- criterion 6: crowding example, simulated threshold under the bound ----

Outcome crit6_zeta_threshold() {
  constexpr double kBudgetSec = 600.0;
  constexpr double kBisectTol = 0.05;
  constexpr double kMonoSlack = 0.05;
  const auto t0 = std::chrono::steady_clock::now();
  auto g = make_uniform_grid(500);
  SlopeProtocol proto;
  proto.t_end = 100.0;
  proto.dt = 0.02;
  proto.t_lo = 80.0;
  proto.t_hi = 100.0;
  proto.sample_every = 10;
  proto.ic = ic_ramp;

  const double rs[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
  bool pass = true;
  std::string detail;
  double prev = -std::numeric_limits<double>::infinity();
  for (double r : rs) {
    VolumeProfile vr = available_volume(r, 0.5, g);
    const double nu = vr.v.values.square().minCoeff() / vr.v.values.maxCoeff();
    const double bound = 2.0 / nu;
    CriticalSearch cs = critical_parameter(
        [&](double z) { return build_example_3_2(z, r, g).system; }, 1.0, 10.0, proto,
        kBisectTol);
    if (!(cs.p_cr <= bound + kBisectTol)) pass = false;
    if (!(cs.p_cr >= prev - kMonoSlack)) pass = false;
    prev = cs.p_cr;
    if (!detail.empty()) detail += "; ";
    detail += "r=" + fmt(r, 3) + ": zeta_cr=" + fmt(cs.p_cr, 4) + " <= 2/nu=" + fmt(bound, 4);
  }
  const double dt = seconds_since(t0);
  if (dt > kBudgetSec) pass = false;
  return {pass, detail + "; " + fmt(dt, 3) + " s"};
}

// ---- criterion 7: certified decay envelopes hold in simulation -------------

Outcome crit7_decay_envelopes() {
  constexpr double kAllow = 1.10;
  auto g = make_uniform_grid(200);
  std::mt19937_64 rng(31337);

  struct Case {
    std::string name;
    RDSystem system;
    Eigen::MatrixXd M1;
    Eigen::VectorXd gamma;
    double lambda_star;
    double t_end;
  };
  std::vector<Case> cases;

  {  // scalar, spatially uniform decay: certificate has zero coupling
    Example31 ex = build_example_3_1(1e-2, 0.0, g);
    auto br = certify_scalar_fickian(ex.a, ex.d);
    if (!br.report.certified()) return {false, "scalar omega=0 certificate did not pass"};
    cases.push_back({"scalar w=0", ex.system, Eigen::MatrixXd::Identity(1, 1),
                     Eigen::VectorXd::Ones(1), br.report.lambda_star, 20.0});
  }
  {  // scalar with weak shear, quadrature-route certificate
    Example31 ex = build_example_3_1(1e-2, 0.01, g);
    auto br = certify_scalar_fickian(ex.a, ex.d);
    if (!br.report.certified()) return {false, "scalar omega=0.01 certificate did not pass"};
    cases.push_back({"scalar w=0.01", ex.system, Eigen::MatrixXd::Identity(1, 1),
                     Eigen::VectorXd::Ones(1), br.report.lambda_star, 20.0});
  }
  {  // scalar with weak shear, closed-form certificate
    Example31 ex = build_example_3_1(1e-2, 0.02, g);
    auto rep = certify_scalar_small_omega(1e-2, 0.02);
    if (!rep.certified()) return {false, "scalar omega=0.02 certificate did not pass"};
    cases.push_back({"scalar w=0.02", ex.system, Eigen::MatrixXd::Identity(1, 1),
                     Eigen::VectorXd::Ones(1), rep.lambda_star, 20.0});
  }

  Eigen::Matrix2d A0;
  A0 << -2.0, 0.5, 0.5, -1.0;
  {  // two species, homogeneous coupling matrix
    ReactionSpec rx;
    rx.species = 2;
    rx.linear = true;
    rx.f = [A0](double, double, const double* z, double* out) {
      out[0] = A0(0, 0) * z[0] + A0(0, 1) * z[1];
      out[1] = A0(1, 0) * z[0] + A0(1, 1) * z[1];
    };
    rx.jac = [A0](double, double, const double*, double* out) {
      out[0] = A0(0, 0);
      out[1] = A0(0, 1);
      out[2] = A0(1, 0);
      out[3] = A0(1, 1);
    };
    std::vector<SpeciesDiffusion> diff{{0.5, constant_field(g, 0.3)},
                                       {0.5, constant_field(g, 0.3)}};
    RDSystem sys = make_system(g, diff, rx);
    LinearSystemInputs in;
    in.grid = g;
    in.diffusion = sys.diffusion;
    in.A = [A0](int) { return Eigen::MatrixXd(A0); };
    in.M1 = Eigen::MatrixXd::Identity(2, 2);
    in.gamma = Eigen::VectorXd::Ones(2);
    auto rep = certify_linear_system(in);
    if (!rep.certified()) return {false, "constant 2x2 certificate did not pass"};
    cases.push_back({"2-species const", std::move(sys), in.M1, in.gamma,
                     rep.lambda_star, 5.0});
  }
  {  // two species with a mild x-dependent off-diagonal (nonzero coupling gain)
    ReactionSpec rx;
    rx.species = 2;
    rx.linear = true;
    rx.space_varying = true;
    rx.f = [A0](double, double x, const double* z, double* out) {
      const double a01 = A0(0, 1) + 0.2 * std::cos(M_PI * x);
      out[0] = A0(0, 0) * z[0] + a01 * z[1];
      out[1] = A0(1, 0) * z[0] + A0(1, 1) * z[1];
    };
    rx.jac = [A0](double, double x, const double*, double* out) {
      out[0] = A0(0, 0);
      out[1] = A0(0, 1) + 0.2 * std::cos(M_PI * x);
      out[2] = A0(1, 0);
      out[3] = A0(1, 1);
    };
    std::vector<SpeciesDiffusion> diff{{0.5, constant_field(g, 0.3)},
                                       {0.5, constant_field(g, 0.3)}};
    RDSystem sys = make_system(g, diff, rx);
    LinearSystemInputs in;
    in.grid = g;
    in.diffusion = sys.diffusion;
    in.A = [A0, &g](int i) {
      Eigen::Matrix2d A = A0;
      A(0, 1) += 0.2 * std::cos(M_PI * g->nodes[i]);
      return Eigen::MatrixXd(A);
    };
    in.M1 = Eigen::MatrixXd::Identity(2, 2);
    in.gamma = Eigen::VectorXd::Ones(2);
    auto rep = certify_linear_system(in);
    if (!rep.certified()) return {false, "x-varying 2x2 certificate did not pass"};
    if (!(rep.beta > 0.05)) return {false, "x-varying case was meant to have beta > 0"};
    cases.push_back({"2-species varying", std::move(sys), in.M1, in.gamma,
                     rep.lambda_star, 5.0});
  }

  double worst = 0.0;
  std::string worst_name;
  for (const auto& c : cases) {
    for (int pair = 0; pair < 2; ++pair) {
      std::vector<Eigen::ArrayXd> za, zb;
      for (int s = 0; s < c.system.reaction.species; ++s) {
        za.push_back(1.0 + random_smooth_field(g, rng, 5, 0.5));
        zb.push_back(1.0 + random_smooth_field(g, rng, 5, 0.5));
      }
      IntegrateOptions opt;
      opt.dt = 0.005;
      opt.t_end = c.t_end;
      opt.sample_every = 10;
      DecaySeries ds =
          contraction_decay_check(c.system, za, zb, c.M1, c.gamma, c.lambda_star, opt);
      if (ds.max_ratio > worst) {
        worst = ds.max_ratio;
        worst_name = c.name;
      }
    }
  }
  return {worst <= kAllow, "5 certified systems x 2 IC pairs, worst v/envelope = " +
                               fmt(worst, 6) + " (" + worst_name + ", allow 1.10)"};
}

// ---- criterion 8: binding correction factor --------------------------------

Outcome crit8_bcf() {
  constexpr double kOracle = 1.0008545711830859;  // n = 10^4 quadrature, r_m=r_r=0.5
  constexpr double kRelTol = 1e-3;
  auto g = make_uniform_grid(500);

  const double flat = compute_bcf(available_volume(0.0, 0.5, g), available_volume(0.0, 0.5, g));
  const bool exact_one = (flat == 1.0);

  const double b55 =
      compute_bcf(available_volume(0.5, 0.5, g), available_volume(0.5, 0.5, g));
  const double rel = std::abs(b55 - kOracle) / kOracle;

  bool monotone_ok = true;
  for (double r : {0.3, 0.7, 1.0}) {
    VolumeProfile v = available_volume(r, 0.5, g);
    if (!(compute_bcf(v, v) >= 1.0)) monotone_ok = false;
  }
  const bool pass = exact_one && rel <= kRelTol && monotone_ok;
  return {pass, "flat = " + fmt(flat, 17) + " (exact 1 required), r=0.5 value " +
                    fmt(b55, 12) + " vs oracle " + fmt(kOracle, 12) + " rel " + fmt(rel, 3) +
                    " (tol 1e-3), identical-profile >= 1: " +
                    (monotone_ok ? "yes" : "NO")};
}

// ---- shared translation-model helpers (criteria 9-11) ----------------------

std::vector<Eigen::ArrayXd> perturbed_translation_ic(const TranslationModel& tm,
                                                     std::mt19937_64& rng) {
  const GridPtr& g = tm.system.grid;
  Eigen::ArrayXd m = 0.75 + random_smooth_field(g, rng, 5, 0.1);
  Eigen::ArrayXd R = 0.75 + random_smooth_field(g, rng, 5, 0.1);
  Eigen::ArrayXd c = Eigen::ArrayXd::Constant(g->n, 0.25);
  return {m, R, c};
}

// ---- criterion 9: binding conservation laws --------------------------------

Outcome crit9_conservation() {
  constexpr double kTol = 1e-8;
  auto g = make_uniform_grid(200);
  TranslationModel tm = build_translation_model(TranslationParams{}, g);
  std::mt19937_64 rng(5150);
  auto z0 = perturbed_translation_ic(tm, rng);
  IntegrateOptions opt;
  opt.dt = 0.02;
  opt.t_end = 50.0;
  opt.sample_every = 25;
  Trajectory traj = integrate_system(tm.system, z0, opt);

  const double s1_0 = integrate_values(*g, traj.states[0][2] + traj.states[0][0]);
  const double s2_0 = integrate_values(*g, traj.states[0][2] + traj.states[0][1]);
  double drift = 0.0;
  for (const auto& st : traj.states) {
    drift = std::max(drift, std::abs(integrate_values(*g, st[2] + st[0]) - s1_0));
    drift = std::max(drift, std::abs(integrate_values(*g, st[2] + st[1]) - s2_0));
  }
  return {drift <= kTol, "max drift of (c+m, c+R) totals over t in [0,50] = " +
                             fmt(drift, 3) + " (tol 1e-8)"};
}

// ---- criterion 10: fast-transport limit approaches the reduced model -------

Outcome crit10_qss() {
  constexpr double kEbarRel = 0.01;
  constexpr double kDecayFactor = 100.0;
  auto g = make_uniform_grid(200);
  TranslationParams p;
  p.chi_scale = 100.0;
  TranslationModel tm = build_translation_model(p, g);
  std::mt19937_64 rng(6021);
  auto z0 = perturbed_translation_ic(tm, rng);
  IntegrateOptions opt;
  opt.dt = 0.02;
  opt.t_end = 50.0;
  opt.sample_every = 50;
  Trajectory traj = integrate_system(tm.system, z0, opt);

  QssErrors q0 = qss_errors(tm, traj.states.front());
  QssErrors qT = qss_errors(tm, traj.states.back());
  const bool ebar_ok = std::abs(qT.e_bar) <= kEbarRel * qT.qss_target;
  const bool decay_ok = qT.m_perp_norm * kDecayFactor <= q0.m_perp_norm &&
                        qT.R_perp_norm * kDecayFactor <= q0.R_perp_norm &&
                        qT.c_perp_norm * kDecayFactor <= q0.c_perp_norm;
  return {ebar_ok && decay_ok,
          "|e_bar(50)| = " + fmt(std::abs(qT.e_bar), 3) + " vs 1% of target " +
              fmt(kEbarRel * qT.qss_target, 3) + "; perp decays m " +
              fmt(q0.m_perp_norm / qT.m_perp_norm, 3) + "x, R " +
              fmt(q0.R_perp_norm / qT.R_perp_norm, 3) + "x, c " +
              fmt(q0.c_perp_norm / qT.c_perp_norm, 3) + "x (need >= 100x)"};
}

// ---- criterion 11: invariant set holds along trajectories ------------------

Outcome crit11_invariant_set() {
  auto g = make_uniform_grid(200);
  TranslationModel tm = build_translation_model(TranslationParams{}, g);
  std::mt19937_64 rng(8080);
  auto z0 = perturbed_translation_ic(tm, rng);
  IntegrateOptions opt;
  opt.dt = 0.02;
  opt.t_end = 20.0;
  opt.sample_every = 10;
  Trajectory traj = integrate_system(tm.system, z0, opt);
  InvariantCheck chk = check_invariant_set(tm, traj);
  return {chk.ok, "min concentration = " + fmt(chk.min_concentration, 3) +
                      " (floor -1e-9), max weighted sum = " + fmt(chk.max_weighted_sum, 6) +
                      " vs C* = " + fmt(chk.c_star, 6)};
}

// ---- criterion 12: hierarchical shortcut == principal-minor arithmetic -----

Outcome crit12_hierarchical() {
  constexpr double kFactor = 0.05;
  auto g = make_uniform_grid(300);
  bool pass = true;
  std::string detail;
  for (double r : {0.0, 0.5, 1.0}) {
    VolumeProfile vr = available_volume(r, 0.5, g);
    const double nu = vr.v.values.square().minCoeff() / vr.v.values.maxCoeff();
    for (double fac : {1.0 + kFactor, 1.0 - kFactor}) {
      const double zeta = (2.0 / nu) * fac;
      Example32Certificate cert = certify_example_3_2(zeta, r, g);

      // the same arithmetic, done here: B = A - diag(10 zeta, zeta nu / 4)
      const double m0 = 1.0 + 10.0 * zeta;
      const double m1 = 0.25 * zeta * nu - 0.5;
      const double m2 = (-1.0 - 10.0 * zeta) * (0.5 - 0.25 * zeta * nu) + 1.0;
      const bool minors_ok = m0 > 0.0 && m1 > 0.0 && m2 > 0.0;

      const bool arithmetic_matches =
          std::abs(cert.stability.minors[0] - m0) <= 1e-12 * std::max(1.0, std::abs(m0)) &&
          std::abs(cert.stability.minors[1] - m1) <= 1e-12 * std::max(1.0, std::abs(m1)) &&
          std::abs(cert.stability.minors[2] - m2) <= 1e-12 * std::max(1.0, std::abs(m2));
      const bool expected = fac > 1.0;
      if (minors_ok != expected || cert.stability.pass != minors_ok ||
          cert.report.certified() != minors_ok || !arithmetic_matches)
        pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "r=" + fmt(r, 2) + " zeta=" + fmt(zeta, 4) +
                (cert.report.certified() ? " certified" : " rejected");
    }
  }
  return {pass, detail};
}

}  // namespace

int main() {
  report(1, "numeric spectral gap respects the coefficient floor", guarded(crit1_eigen_floor));
  report(2, "stationary profile is the null vector and mass is conserved",
         guarded(crit2_null_and_conservation));
  report(3, "operator is self-adjoint in the weighted inner product",
         guarded(crit3_self_adjoint));
  report(4, "shear sweep places the instability onset in [0.15, 0.6]",
         guarded(crit4_omega_sweep));
  report(5, "closed-form scalar boundary and certificate soundness",
         guarded(crit5_small_omega_boundary));
  report(6, "simulated crowding threshold stays under the certificate bound",
         guarded(crit6_zeta_threshold));
  report(7, "certified contraction envelopes hold in simulation",
         guarded(crit7_decay_envelopes));
  report(8, "binding correction factor values", guarded(crit8_bcf));
  report(9, "translation model conserves binding totals", guarded(crit9_conservation));
  report(10, "fast transport drives the system to the reduced model", guarded(crit10_qss));
  report(11, "translation trajectories stay in the invariant set",
         guarded(crit11_invariant_set));
  report(12, "hierarchical certificate equals the minor arithmetic",
         guarded(crit12_hierarchical));

  std::printf("%d of 12 criteria passed\n", 12 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
