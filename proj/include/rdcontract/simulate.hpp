// Time integration of coupled reaction-transport systems: implicit transport
// (tridiagonal solve per species), explicit reaction, plus the measurement
// helpers used by the parameter sweeps (deviation decomposition, asymptotic
// log-norm slope, bisection for critical parameters, pairwise decay check).
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "rdcontract/grid.hpp"
#include "rdcontract/operators.hpp"

namespace rdc {

struct ReactionSpec {
  int species = 0;
  // f(t, x, z, out): reaction rates for all species at one node.
  std::function<void(double, double, const double*, double*)> f;
  // jac(t, x, z, out): row-major species x species Jacobian of f in z.
  std::function<void(double, double, const double*, double*)> jac;
  bool linear = false;
  bool space_varying = false;
  bool time_varying = false;
};

// Compares jac against finite differences of f at a handful of probe states;
// throws InvalidSpec on disagreement.
void check_jacobian_consistency(const ReactionSpec& r, const GridPtr& g,
                                const std::vector<Eigen::VectorXd>& probes);

struct RDSystem {
  GridPtr grid;
  std::vector<SpeciesDiffusion> diffusion;
  std::vector<OperatorAssembly> ops;  // one per species, same order
  ReactionSpec reaction;
  bool nonnegative_states = false;  // assert trajectories stay >= -1e-9
};

RDSystem make_system(GridPtr grid, std::vector<SpeciesDiffusion> diffusion,
                     ReactionSpec reaction, bool nonnegative_states = false);

struct Trajectory {
  GridPtr grid;
  int species = 0;
  std::vector<double> times;
  // states[sample][species] = nodal values
  std::vector<std::vector<Eigen::ArrayXd>> states;
  std::vector<double> norms;  // combined L2 norm of all species at each sample
};

struct IntegrateOptions {
  double dt = 0.02;
  double t_end = 100.0;
  int sample_every = 10;
  bool check_finite = true;
};

Trajectory integrate_system(const RDSystem& sys, const std::vector<Eigen::ArrayXd>& z0,
                            const IntegrateOptions& opt);

// Split z into psi-weighted averages and the zero-average remainders:
// wbar_i = integral z_i, zperp_i = z_i - psi_i wbar_i.
struct Decomposition {
  Eigen::VectorXd wbar;
  std::vector<ScalarField> zperp;
};
Decomposition decompose(const RDSystem& sys, const std::vector<Eigen::ArrayXd>& z);

// Least-squares slope of log ||z(t)|| over samples with t in [t_lo, t_hi].
// Throws DegenerateWindow if fewer than two samples fall in the window or the
// norms underflow.
double log_norm_slope(const Trajectory& traj, double t_lo, double t_hi);

struct SlopeProtocol {
  double t_end = 100.0;
  double dt = 0.02;
  double t_lo = 80.0;
  double t_hi = 100.0;
  int sample_every = 10;
  std::function<std::vector<Eigen::ArrayXd>(const RDSystem&)> ic;
};
std::vector<Eigen::ArrayXd> ic_uniform_one(const RDSystem& sys);
std::vector<Eigen::ArrayXd> ic_ramp(const RDSystem& sys);
double measured_slope(const RDSystem& sys, const SlopeProtocol& proto);

struct CriticalSearch {
  double p_cr = 0.0;
  double slope_lo = 0.0;
  double slope_hi = 0.0;
  int evals = 0;
};
// Bisects build(p) between p_lo and p_hi for the sign change of the measured
// slope.  |slope| <= flat_tol counts as the boundary itself.  Throws NoBracket
// if the endpoint slopes have the same sign.
CriticalSearch critical_parameter(const std::function<RDSystem(double)>& build,
                                  double p_lo, double p_hi, const SlopeProtocol& proto,
                                  double tol, double flat_tol = 1e-4);

// Weighted squared distance v between two trajectories from z0a and z0b:
//   v = ebar^T M1 ebar + sum_i gamma_i integral (eperp_i)^2 / psi_i
// checked at every sample against v(0) exp(-2 lambda_star t).
struct DecaySeries {
  std::vector<double> times;
  std::vector<double> v;
  std::vector<double> envelope;
  double max_ratio = 0.0;  // max over samples of v / envelope
  bool within = false;
};
DecaySeries contraction_decay_check(const RDSystem& sys,
                                    const std::vector<Eigen::ArrayXd>& z0a,
                                    const std::vector<Eigen::ArrayXd>& z0b,
                                    const Eigen::MatrixXd& M1,
                                    const Eigen::VectorXd& gamma, double lambda_star,
                                    const IntegrateOptions& opt);

// Random field from a low-order cosine series (zero flux compatible), values
// in roughly [-amp, amp].  Deterministic in the supplied engine state.
Eigen::ArrayXd random_smooth_field(const GridPtr& g, std::mt19937_64& rng, int modes,
                                   double amp);

}  // namespace rdc
