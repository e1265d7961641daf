#include "rdcontract/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rdc {
namespace {

// Prefactored Thomas solve for (W - dt F), where F is the flux-difference
// form of one species' transport operator (times quadrature weights).
struct TridiagLU {
  Eigen::ArrayXd sub, diag, super;  // original matrix bands
  Eigen::ArrayXd lw, dprime;        // factorization: lw multipliers, pivots
  Eigen::ArrayXd w;                 // quadrature weights
  Eigen::ArrayXd dt_alpha, dt_beta; // dt-scaled edge coefficients as stored
  double dt = 0.0;

  void build(const OperatorAssembly& op, double dt_in) {
    dt = dt_in;
    const auto& g = *op.grid();
    const int n = g.n;
    w = g.quad_weights;
    dt_alpha = dt * op.edge_alpha();
    dt_beta = dt * op.edge_beta();
    sub = Eigen::ArrayXd::Zero(n);
    super = Eigen::ArrayXd::Zero(n);
    diag.resize(n);
    for (int i = 0; i < n; ++i) {
      double dd = w[i];
      if (i > 0) {
        sub[i] = -dt_alpha[i - 1];
        dd += dt_beta[i - 1];
      }
      if (i < n - 1) {
        super[i] = -dt_beta[i];
        dd += dt_alpha[i];
      }
      diag[i] = dd;
    }
    lw.resize(n);
    dprime.resize(n);
    dprime[0] = diag[0];
    lw[0] = 0.0;
    for (int i = 1; i < n; ++i) {
      lw[i] = sub[i] / dprime[i - 1];
      dprime[i] = diag[i] - lw[i] * super[i - 1];
    }
  }

  void solve(const Eigen::ArrayXd& rhs, Eigen::ArrayXd& y) const {
    const int n = (int)rhs.size();
    y.resize(n);
    y[0] = rhs[0];
    for (int i = 1; i < n; ++i) y[i] = rhs[i] - lw[i] * y[i - 1];
    y[n - 1] /= dprime[n - 1];
    for (int i = n - 2; i >= 0; --i) y[i] = (y[i] - super[i] * y[i + 1]) / dprime[i];
  }

  // One residual-correction pass (long double residual of the flux form),
  // then rebuild the state from the solved fluxes so that the discrete mass
  // identity sum_i w_i y_i = sum_i w_i u_i telescopes exactly.
  void step(const Eigen::ArrayXd& u, Eigen::ArrayXd& y, Eigen::ArrayXd& scratch) const {
    const int n = (int)u.size();
    Eigen::ArrayXd rhs = w * u;
    solve(rhs, y);
    scratch.resize(n);
    for (int i = 0; i < n; ++i) {
      long double ax = (long double)w[i] * y[i];
      if (i > 0)
        ax -= (long double)dt_alpha[i - 1] * y[i - 1] - (long double)dt_beta[i - 1] * y[i];
      if (i < n - 1)
        ax += (long double)dt_alpha[i] * y[i] - (long double)dt_beta[i] * y[i + 1];
      scratch[i] = (double)((long double)rhs[i] - ax);
    }
    Eigen::ArrayXd delta;
    solve(scratch, delta);
    y += delta;
    // Flux projection: edge values computed once, used with both signs.
    scratch[0] = 0.0;
    for (int k = 0; k < n - 1; ++k)
      scratch[k + 1] = dt_alpha[k] * y[k] - dt_beta[k] * y[k + 1];
    for (int i = 0; i < n; ++i) {
      double jr = (i < n - 1) ? scratch[i + 1] : 0.0;
      y[i] = (rhs[i] + scratch[i] - jr) / w[i];
    }
  }
};

}  // namespace

void check_jacobian_consistency(const ReactionSpec& r, const GridPtr& g,
                                const std::vector<Eigen::VectorXd>& probes) {
  if (!r.f || !r.jac) throw InvalidSpec("reaction needs both f and jac");
  if (r.species < 1) throw InvalidSpec("reaction needs at least one species");
  const int ns = r.species;
  const double xs[] = {0.0, g->nodes[g->n / 3], 1.0};
  const double ts[] = {0.0, 1.0};
  std::vector<double> f0(ns), fp(ns), fm(ns), J(ns * ns);
  for (const auto& z : probes) {
    if ((int)z.size() != ns) throw InvalidSpec("probe dimension mismatch");
    for (double t : ts) {
      for (double x : xs) {
        r.jac(t, x, z.data(), J.data());
        for (int j = 0; j < ns; ++j) {
          const double hstep = 1e-6 * std::max(1.0, std::abs(z[j]));
          Eigen::VectorXd zp = z, zm = z;
          zp[j] += hstep;
          zm[j] -= hstep;
          r.f(t, x, zp.data(), fp.data());
          r.f(t, x, zm.data(), fm.data());
          for (int i = 0; i < ns; ++i) {
            const double fd = (fp[i] - fm[i]) / (2.0 * hstep);
            const double ref = std::max({1.0, std::abs(fd), std::abs(J[i * ns + j])});
            if (std::abs(fd - J[i * ns + j]) > 1e-5 * ref) {
              std::ostringstream os;
              os << "jacobian entry (" << i << "," << j << ") disagrees with finite "
                 << "difference: jac=" << J[i * ns + j] << " fd=" << fd << " at x=" << x;
              throw InvalidSpec(os.str());
            }
          }
        }
      }
    }
  }
}

RDSystem make_system(GridPtr grid, std::vector<SpeciesDiffusion> diffusion,
                     ReactionSpec reaction, bool nonnegative_states) {
  if ((int)diffusion.size() != reaction.species)
    throw InvalidSpec("diffusion entries must match reaction species count");
  RDSystem sys;
  sys.grid = grid;
  sys.ops.reserve(diffusion.size());
  for (auto& d : diffusion) sys.ops.emplace_back(grid, d);
  sys.diffusion = std::move(diffusion);
  sys.reaction = std::move(reaction);
  sys.nonnegative_states = nonnegative_states;
  const int ns = sys.reaction.species;
  std::vector<Eigen::VectorXd> probes;
  probes.push_back(Eigen::VectorXd::Zero(ns));
  probes.push_back(Eigen::VectorXd::Ones(ns));
  Eigen::VectorXd p3(ns), p4(ns);
  for (int i = 0; i < ns; ++i) {
    p3[i] = 0.3 + 0.4 * i;
    p4[i] = 1.7 - 0.5 * i;
  }
  probes.push_back(p3);
  probes.push_back(p4);
  check_jacobian_consistency(sys.reaction, grid, probes);
  return sys;
}

Trajectory integrate_system(const RDSystem& sys, const std::vector<Eigen::ArrayXd>& z0,
                            const IntegrateOptions& opt) {
  const int ns = sys.reaction.species;
  const int n = sys.grid->n;
  if ((int)z0.size() != ns) throw InvalidSpec("initial state species count mismatch");
  for (const auto& z : z0)
    if ((int)z.size() != n) throw InvalidGrid("initial state length mismatch");
  if (!(opt.dt > 0.0) || !(opt.t_end > 0.0))
    throw InvalidParameter("integrate: dt and t_end must be positive");

  const long steps = std::lround(opt.t_end / opt.dt);
  if (steps < 1) throw InvalidParameter("integrate: t_end shorter than one step");

  std::vector<TridiagLU> lu(ns);
  for (int s = 0; s < ns; ++s) lu[s].build(sys.ops[s], opt.dt);

  std::vector<Eigen::ArrayXd> z = z0, u(ns);
  Eigen::ArrayXd ybuf, scratch;
  std::vector<double> state(ns), rate(ns);

  Trajectory traj;
  traj.grid = sys.grid;
  traj.species = ns;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.states.push_back(z);
    double s2 = 0.0;
    for (int s = 0; s < ns; ++s) s2 += integrate_values(*sys.grid, z[s].square());
    traj.norms.push_back(std::sqrt(s2));
  };
  record(0.0);

  for (int s = 0; s < ns; ++s) u[s].resize(n);
  for (long step = 1; step <= steps; ++step) {
    const double t = (step - 1) * opt.dt;
    for (int i = 0; i < n; ++i) {
      for (int s = 0; s < ns; ++s) state[s] = z[s][i];
      sys.reaction.f(t, sys.grid->nodes[i], state.data(), rate.data());
      for (int s = 0; s < ns; ++s) u[s][i] = z[s][i] + opt.dt * rate[s];
    }
    for (int s = 0; s < ns; ++s) {
      lu[s].step(u[s], ybuf, scratch);
      z[s] = ybuf;
    }
    if (sys.nonnegative_states) {
      for (int s = 0; s < ns; ++s)
        if ((z[s] < -1e-9).any())
          throw IntegrationFailure("state went negative at t=" + std::to_string(t + opt.dt));
    }
    if (opt.check_finite && (step % 64 == 0 || step == steps)) {
      for (int s = 0; s < ns; ++s)
        if (!z[s].isFinite().all())
          throw IntegrationFailure("state became non-finite at t=" +
                                   std::to_string(t + opt.dt));
    }
    if (step % opt.sample_every == 0 || step == steps) record(step * opt.dt);
  }
  return traj;
}

Decomposition decompose(const RDSystem& sys, const std::vector<Eigen::ArrayXd>& z) {
  const int ns = (int)z.size();
  Decomposition dec;
  dec.wbar.resize(ns);
  dec.zperp.reserve(ns);
  for (int s = 0; s < ns; ++s) {
    dec.wbar[s] = integrate_values(*sys.grid, z[s]);
    Eigen::ArrayXd perp = z[s] - sys.ops[s].psi().values * dec.wbar[s];
    dec.zperp.emplace_back(sys.grid, std::move(perp));
  }
  return dec;
}

double log_norm_slope(const Trajectory& traj, double t_lo, double t_hi) {
  std::vector<double> ts, ys;
  for (size_t k = 0; k < traj.times.size(); ++k) {
    if (traj.times[k] < t_lo - 1e-12 || traj.times[k] > t_hi + 1e-12) continue;
    if (!(traj.norms[k] > 1e-300))
      throw DegenerateWindow("norm underflow inside slope window");
    ts.push_back(traj.times[k]);
    ys.push_back(std::log(traj.norms[k]));
  }
  if (ts.size() < 2) throw DegenerateWindow("fewer than two samples in slope window");
  const double m = (double)ts.size();
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (size_t k = 0; k < ts.size(); ++k) {
    st += ts[k];
    sy += ys[k];
    stt += ts[k] * ts[k];
    sty += ts[k] * ys[k];
  }
  const double denom = m * stt - st * st;
  if (!(std::abs(denom) > 0.0)) throw DegenerateWindow("slope window has no spread");
  return (m * sty - st * sy) / denom;
}

std::vector<Eigen::ArrayXd> ic_uniform_one(const RDSystem& sys) {
  return std::vector<Eigen::ArrayXd>(sys.reaction.species,
                                     Eigen::ArrayXd::Ones(sys.grid->n));
}

std::vector<Eigen::ArrayXd> ic_ramp(const RDSystem& sys) {
  std::vector<Eigen::ArrayXd> z;
  for (int s = 0; s < sys.reaction.species; ++s)
    z.push_back(double(s) + sys.grid->nodes);
  return z;
}

double measured_slope(const RDSystem& sys, const SlopeProtocol& proto) {
  IntegrateOptions opt;
  opt.dt = proto.dt;
  opt.t_end = proto.t_end;
  opt.sample_every = proto.sample_every;
  auto z0 = proto.ic ? proto.ic(sys) : ic_uniform_one(sys);
  Trajectory traj = integrate_system(sys, z0, opt);
  return log_norm_slope(traj, proto.t_lo, proto.t_hi);
}

CriticalSearch critical_parameter(const std::function<RDSystem(double)>& build,
                                  double p_lo, double p_hi, const SlopeProtocol& proto,
                                  double tol, double flat_tol) {
  if (!(p_lo < p_hi)) throw InvalidParameter("critical_parameter: need p_lo < p_hi");
  CriticalSearch out;
  double s_lo = measured_slope(build(p_lo), proto);
  double s_hi = measured_slope(build(p_hi), proto);
  out.evals = 2;
  if (std::abs(s_lo) <= flat_tol) {
    out.p_cr = p_lo;
    out.slope_lo = out.slope_hi = s_lo;
    return out;
  }
  if (std::abs(s_hi) <= flat_tol) {
    out.p_cr = p_hi;
    out.slope_lo = out.slope_hi = s_hi;
    return out;
  }
  if ((s_lo > 0) == (s_hi > 0))
    throw NoBracket("slope has the same sign at both endpoints");
  while (p_hi - p_lo > tol) {
    const double pm = 0.5 * (p_lo + p_hi);
    const double sm = measured_slope(build(pm), proto);
    ++out.evals;
    if (std::abs(sm) <= flat_tol) {
      out.p_cr = pm;
      out.slope_lo = s_lo;
      out.slope_hi = s_hi;
      return out;
    }
    if ((sm > 0) == (s_lo > 0)) {
      p_lo = pm;
      s_lo = sm;
    } else {
      p_hi = pm;
      s_hi = sm;
    }
  }
  out.p_cr = 0.5 * (p_lo + p_hi);
  out.slope_lo = s_lo;
  out.slope_hi = s_hi;
  return out;
}

DecaySeries contraction_decay_check(const RDSystem& sys,
                                    const std::vector<Eigen::ArrayXd>& z0a,
                                    const std::vector<Eigen::ArrayXd>& z0b,
                                    const Eigen::MatrixXd& M1,
                                    const Eigen::VectorXd& gamma, double lambda_star,
                                    const IntegrateOptions& opt) {
  const int ns = sys.reaction.species;
  if (M1.rows() != ns || M1.cols() != ns || gamma.size() != ns)
    throw InvalidMetric("metric dimensions must match species count");
  Trajectory ta = integrate_system(sys, z0a, opt);
  Trajectory tb = integrate_system(sys, z0b, opt);
  DecaySeries out;
  std::vector<Eigen::ArrayXd> e(ns);
  for (size_t k = 0; k < ta.times.size(); ++k) {
    for (int s = 0; s < ns; ++s) e[s] = ta.states[k][s] - tb.states[k][s];
    Decomposition dec = decompose(sys, e);
    double v = dec.wbar.dot(M1 * dec.wbar);
    for (int s = 0; s < ns; ++s) {
      Eigen::ArrayXd q = dec.zperp[s].values.square() / sys.ops[s].psi().values;
      v += gamma[s] * integrate_values(*sys.grid, q);
    }
    out.times.push_back(ta.times[k]);
    out.v.push_back(v);
  }
  const double v0 = out.v.front();
  out.max_ratio = 0.0;
  for (size_t k = 0; k < out.times.size(); ++k) {
    const double env = v0 * std::exp(-2.0 * lambda_star * out.times[k]);
    out.envelope.push_back(env);
    if (env > 0.0) out.max_ratio = std::max(out.max_ratio, out.v[k] / env);
  }
  out.within = out.max_ratio <= 1.0 + 1e-9;
  return out;
}

Eigen::ArrayXd random_smooth_field(const GridPtr& g, std::mt19937_64& rng, int modes,
                                   double amp) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double hm = 0.0;
  for (int k = 1; k <= modes; ++k) hm += 1.0 / k;
  Eigen::ArrayXd f = Eigen::ArrayXd::Zero(g->n);
  for (int k = 1; k <= modes; ++k) {
    const double c = amp * uni(rng) / (k * hm);
    f += c * (k * M_PI * g->nodes).cos();
  }
  return f;
}

}  // namespace rdc
