#include "rdcontract/certificates.hpp"

#include <json.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "rdcontract/simulate.hpp"

namespace rdc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_box(const Box& box) {
  if (box.lo.size() != box.hi.size())
    throw InvalidParameter("box lo/hi dimensions differ");
  for (int i = 0; i < box.dim(); ++i)
    if (!(box.lo[i] <= box.hi[i])) throw InvalidParameter("box has lo > hi");
}

std::string mode_name(CertMode m) {
  switch (m) {
    case CertMode::FullTheorem: return "full-theorem";
    case CertMode::Hierarchical1: return "hierarchical-1";
    case CertMode::Hierarchical2: return "hierarchical-2";
  }
  return "?";
}

double spectral_norm(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.transpose() * A);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

// Shared per-species transport data for the certificate pipelines.
struct SpeciesData {
  std::vector<ScalarField> psi;
  Eigen::VectorXd Lambda;
  double m2_star = kInf;
};

SpeciesData build_species(const GridPtr& grid,
                          const std::vector<SpeciesDiffusion>& diffusion,
                          const Eigen::VectorXd& gamma, bool numeric_lambda) {
  const int ns = (int)diffusion.size();
  if (gamma.size() != ns) throw InvalidMetric("gamma size must match species count");
  if ((gamma.array() <= 0.0).any())
    throw InvalidMetric("gamma entries must be positive");
  SpeciesData sd;
  sd.Lambda.resize(ns);
  for (int s = 0; s < ns; ++s) {
    OperatorAssembly op(grid, diffusion[s]);
    sd.Lambda[s] = numeric_lambda ? op.second_eigenvalue_numeric() : op.lambda_bound();
    sd.m2_star = std::min(sd.m2_star, gamma[s] / op.psi().values.maxCoeff());
    sd.psi.push_back(op.psi());
  }
  return sd;
}

double min_eig_sym(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  return es.eigenvalues().minCoeff();
}

// Four-condition pipeline over Jacobian samples: each state sample induces a
// space-varying matrix field A_s(x) = jac(x, z_s), run through the averaged /
// deviation / coupling bounds, reduced by inf (margins) and sup (beta).
CertificateReport run_pipeline(
    const GridPtr& grid, const SpeciesData& sd, const Eigen::MatrixXd& M1,
    const Eigen::VectorXd& gamma,
    const std::function<Eigen::MatrixXd(int, const Eigen::VectorXd&)>& jac,
    const std::vector<Eigen::VectorXd>& samples, const SamplingConfig& cfg) {
  const int ns = (int)gamma.size();
  const int n = grid->n;
  const auto& w = grid->quad_weights;

  CertificateReport rep;
  rep.mode = CertMode::FullTheorem;
  rep.sampling = cfg;
  rep.m1_star = min_eig_sym(M1);
  if (rep.m1_star <= 0.0) throw InvalidMetric("M1 must be positive definite");
  rep.m2_star = sd.m2_star;

  double l1 = kInf, l2 = kInf;
  Eigen::ArrayXd node_sup = Eigen::ArrayXd::Constant(n, -kInf);
  WorstSample worst_l1, worst_l2, worst_beta;
  std::vector<Eigen::MatrixXd> Gfield(n);
  Eigen::VectorXd psi_at(ns), m2_at(ns);

  for (const auto& z : samples) {
    Eigen::MatrixXd Abar = Eigen::MatrixXd::Zero(ns, ns);
    for (int i = 0; i < n; ++i) {
      for (int s = 0; s < ns; ++s) {
        psi_at[s] = sd.psi[s].values[i];
        m2_at[s] = gamma[s] / psi_at[s];
      }
      Eigen::MatrixXd J = jac(i, z);
      if (J.rows() != ns || J.cols() != ns)
        throw InvalidSpec("jacobian sampler returned wrong dimensions");
      Eigen::MatrixXd JPsi = J * psi_at.asDiagonal();
      Abar += w[i] * JPsi;
      const double margin =
          -metric_sym_max_eig(m2_at.asDiagonal(),
                              J - Eigen::MatrixXd(sd.Lambda.asDiagonal()));
      if (margin < l2) {
        l2 = margin;
        worst_l2 = {margin, grid->nodes[i], z, "deviation-contraction margin"};
      }
      Gfield[i] = JPsi.transpose() * M1 + m2_at.asDiagonal() * JPsi;
    }
    const double margin1 = -metric_sym_max_eig(M1, Abar);
    if (margin1 < l1) {
      l1 = margin1;
      worst_l1 = {margin1, kNaN, z, "averaged-dynamics margin"};
    }
    Eigen::MatrixXd Gmean = Eigen::MatrixXd::Zero(ns, ns);
    for (int i = 0; i < n; ++i) Gmean += w[i] * Gfield[i];
    for (int i = 0; i < n; ++i) {
      Eigen::MatrixXd Gp = Gfield[i] - Gmean;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Gp.transpose() * Gp);
      const double msq = std::max(0.0, es.eigenvalues().maxCoeff());
      if (msq > node_sup[i]) {
        node_sup[i] = msq;
        if (worst_beta.value <= msq) {
          worst_beta = {msq, grid->nodes[i], z, "sup of coupling gain squared"};
        }
      }
    }
  }

  Eigen::ArrayXd terms = w * node_sup;
  const double beta_sq = std::max(0.0, neumaier_sum(terms.data(), n));
  rep.lambda1 = l1;
  rep.lambda2 = l2;
  rep.beta = std::sqrt(beta_sq);
  const SmallGain sg = small_gain(l1, l2, rep.beta, rep.m1_star, rep.m2_star);
  rep.sigma = sg.sigma;
  rep.condition_pass[0] = l1 > 0.0;
  rep.condition_pass[1] = l2 > 0.0;
  rep.condition_pass[2] = std::isfinite(rep.beta);
  rep.condition_pass[3] = sg.pass;
  rep.worst[0] = worst_l1;
  rep.worst[1] = worst_l2;
  rep.worst[2] = worst_beta;
  rep.worst[3] = {l1 * l2 - sg.sigma * sg.sigma, kNaN, Eigen::VectorXd(),
                  "small-gain slack lambda1*lambda2 - sigma^2"};
  rep.lambda_star = rep.certified() ? sg.lambda_star : kNaN;
  return rep;
}

}  // namespace

std::vector<Eigen::VectorXd> sample_box(const Box& box, const SamplingConfig& cfg) {
  check_box(box);
  const int d = box.dim();
  std::vector<Eigen::VectorXd> pts;
  if (d == 0) {
    pts.emplace_back(0);
    return pts;
  }
  const int corner_count = d <= 6 ? (1 << d) : 64;
  for (int c = 0; c < corner_count; ++c) {
    Eigen::VectorXd p(d);
    for (int i = 0; i < d; ++i) p[i] = (c >> i) & 1 ? box.hi[i] : box.lo[i];
    pts.push_back(p);
  }
  Eigen::VectorXd mid = 0.5 * (box.lo + box.hi);
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd p = mid;
    p[i] = box.lo[i];
    pts.push_back(p);
    p[i] = box.hi[i];
    pts.push_back(p);
  }
  pts.push_back(mid);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int k = 0; k < cfg.n_random; ++k) {
    Eigen::VectorXd p(d);
    for (int i = 0; i < d; ++i) p[i] = box.lo[i] + uni(rng) * (box.hi[i] - box.lo[i]);
    pts.push_back(p);
  }
  return pts;
}

double metric_sym_max_eig(const Eigen::MatrixXd& M, const Eigen::MatrixXd& J) {
  const int n = (int)M.rows();
  if (M.cols() != n || J.rows() != n || J.cols() != n)
    throw InvalidMetric("metric/jacobian dimension mismatch");
  if ((M - M.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, M.cwiseAbs().maxCoeff()))
    throw InvalidMetric("metric is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success)
    throw InvalidMetric("metric is not positive definite");
  Eigen::MatrixXd S = 0.5 * (M * J + J.transpose() * M);
  Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd X = L.triangularView<Eigen::Lower>().solve(S);
  Eigen::MatrixXd T =
      L.triangularView<Eigen::Lower>().solve(X.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (T + T.transpose()));
  return es.eigenvalues().maxCoeff();
}

Margin lambda1_margin(const Eigen::MatrixXd& M1,
                      const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& jac_f1,
                      const Box& box, const SamplingConfig& cfg) {
  if (min_eig_sym(M1) <= 0.0) throw InvalidMetric("M1 must be positive definite");
  Margin m;
  m.value = kInf;
  for (const auto& z : sample_box(box, cfg)) {
    const double margin = -metric_sym_max_eig(M1, jac_f1(z));
    if (margin < m.value) {
      m.value = margin;
      m.worst = {margin, kNaN, z, "averaged-dynamics margin"};
    }
  }
  return m;
}

Margin lambda2_margin(const Eigen::VectorXd& gamma,
                      const std::vector<ScalarField>& psi,
                      const Eigen::VectorXd& Lambda,
                      const std::function<Eigen::MatrixXd(int, const Eigen::VectorXd&)>& jac_at_node,
                      const Box& box, const SamplingConfig& cfg) {
  const int ns = (int)gamma.size();
  if ((int)psi.size() != ns || Lambda.size() != ns)
    throw InvalidMetric("gamma/psi/Lambda sizes disagree");
  if ((gamma.array() <= 0.0).any())
    throw InvalidMetric("gamma entries must be positive");
  const GridPtr& grid = psi[0].grid;
  Margin m;
  m.value = kInf;
  Eigen::VectorXd m2_at(ns);
  const Eigen::MatrixXd Ldiag = Lambda.asDiagonal();
  for (const auto& z : sample_box(box, cfg)) {
    for (int i = 0; i < grid->n; ++i) {
      for (int s = 0; s < ns; ++s) m2_at[s] = gamma[s] / psi[s].values[i];
      const double margin =
          -metric_sym_max_eig(m2_at.asDiagonal(), jac_at_node(i, z) - Ldiag);
      if (margin < m.value) {
        m.value = margin;
        m.worst = {margin, grid->nodes[i], z, "deviation-contraction margin"};
      }
    }
  }
  return m;
}

BetaBound coupling_beta(const Eigen::MatrixXd& M1, const Eigen::VectorXd& gamma,
                        const std::vector<ScalarField>& psi,
                        const std::function<Eigen::MatrixXd(int, const Eigen::VectorXd&)>& jac_g1,
                        const std::function<Eigen::MatrixXd(int, const Eigen::VectorXd&)>& jac_g2,
                        const GridPtr& grid, const Box& box, const SamplingConfig& cfg) {
  const int ns = (int)gamma.size();
  const int n = grid->n;
  const auto& w = grid->quad_weights;
  Eigen::ArrayXd node_sup = Eigen::ArrayXd::Constant(n, -kInf);
  BetaBound bb;
  std::vector<Eigen::MatrixXd> Gfield(n);
  Eigen::VectorXd m2_at(ns);
  for (const auto& z : sample_box(box, cfg)) {
    Eigen::MatrixXd Gmean = Eigen::MatrixXd::Zero(ns, ns);
    for (int i = 0; i < n; ++i) {
      for (int s = 0; s < ns; ++s) m2_at[s] = gamma[s] / psi[s].values[i];
      Gfield[i] = jac_g1(i, z).transpose() * M1 + m2_at.asDiagonal() * jac_g2(i, z);
      Gmean += w[i] * Gfield[i];
    }
    for (int i = 0; i < n; ++i) {
      Eigen::MatrixXd Gp = Gfield[i] - Gmean;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Gp.transpose() * Gp);
      const double msq = std::max(0.0, es.eigenvalues().maxCoeff());
      if (msq > node_sup[i]) {
        node_sup[i] = msq;
        if (msq >= bb.worst.value)
          bb.worst = {msq, grid->nodes[i], z, "sup of coupling gain squared"};
      }
    }
  }
  Eigen::ArrayXd terms = w * node_sup;
  bb.beta_sq = std::max(0.0, neumaier_sum(terms.data(), n));
  bb.beta = std::sqrt(bb.beta_sq);
  return bb;
}

SmallGain small_gain(double lambda1, double lambda2, double beta, double m1_star,
                     double m2_star) {
  if (!(m1_star > 0.0) || !(m2_star > 0.0))
    throw InvalidMetric("small_gain needs positive metric floors");
  if (!std::isfinite(lambda1) || !std::isfinite(lambda2))
    throw InvalidParameter("small_gain needs finite margins");
  SmallGain sg;
  sg.sigma = beta / (2.0 * std::sqrt(m1_star * m2_star));
  sg.pass = lambda1 > 0.0 && lambda2 > 0.0 &&
            lambda1 * lambda2 > sg.sigma * sg.sigma + 1e-12;
  const double mid = 0.5 * (lambda1 + lambda2);
  const double gap = 0.5 * (lambda1 - lambda2);
  sg.lambda_star = mid - std::sqrt(gap * gap + sg.sigma * sg.sigma);
  return sg;
}

std::string CertificateReport::to_json() const {
  nlohmann::json j;
  j["mode"] = mode_name(mode);
  j["lambda1"] = lambda1;
  j["lambda2"] = lambda2;
  j["beta"] = beta;
  j["sigma"] = sigma;
  if (std::isfinite(lambda_star))
    j["lambda_star"] = lambda_star;
  else
    j["lambda_star"] = nullptr;
  j["m1_star"] = m1_star;
  j["m2_star"] = m2_star;
  j["certified"] = certified();
  nlohmann::json conds = nlohmann::json::array();
  for (int c = 0; c < 4; ++c) {
    nlohmann::json jc;
    jc["condition"] = c + 1;
    jc["pass"] = condition_pass[c];
    jc["worst_value"] = worst[c].value;
    if (std::isfinite(worst[c].x))
      jc["worst_x"] = worst[c].x;
    else
      jc["worst_x"] = nullptr;
    jc["worst_state"] = std::vector<double>(worst[c].state.data(),
                                            worst[c].state.data() + worst[c].state.size());
    jc["what"] = worst[c].what;
    conds.push_back(jc);
  }
  j["conditions"] = conds;
  j["sampling"] = {{"n_random", sampling.n_random}, {"seed", sampling.seed}};
  j["notes"] = notes;
  return j.dump(2);
}

ScalarFickianBreakdown certify_scalar_fickian(const ScalarField& a, double d) {
  if (!(d > 0.0)) throw InvalidParameter("diffusion coefficient must be positive");
  ScalarFickianBreakdown out;
  out.d = d;
  out.a_bar = integrate(a);
  out.a_sup = a.values.maxCoeff();
  Eigen::ArrayXd perp = a.values - out.a_bar;
  out.a_perp_sq = integrate_values(*a.grid, perp.square());

  CertificateReport& rep = out.report;
  rep.mode = CertMode::FullTheorem;
  rep.m1_star = 1.0;
  rep.m2_star = 1.0;
  rep.lambda1 = -out.a_bar;
  rep.lambda2 = d * OperatorAssembly::lambda_star - out.a_sup;
  rep.beta = 2.0 * std::sqrt(out.a_perp_sq);
  const SmallGain sg = small_gain(rep.lambda1, rep.lambda2, rep.beta, 1.0, 1.0);
  rep.sigma = sg.sigma;
  rep.condition_pass[0] = rep.lambda1 > 0.0;
  rep.condition_pass[1] = rep.lambda2 > 0.0;
  rep.condition_pass[2] = true;
  rep.condition_pass[3] = sg.pass;
  int imax = 0;
  a.values.maxCoeff(&imax);
  int iperp = 0;
  perp.abs().maxCoeff(&iperp);
  Eigen::VectorXd none;
  rep.worst[0] = {rep.lambda1, kNaN, none, "averaged-dynamics margin (-mean a)"};
  rep.worst[1] = {rep.lambda2, a.grid->nodes[imax], none,
                  "deviation-contraction margin at sup a"};
  rep.worst[2] = {4.0 * perp[iperp] * perp[iperp], a.grid->nodes[iperp], none,
                  "sup of coupling gain squared"};
  rep.worst[3] = {rep.lambda1 * rep.lambda2 - rep.sigma * rep.sigma, kNaN, none,
                  "small-gain slack lambda1*lambda2 - sigma^2"};
  rep.lambda_star = rep.certified() ? sg.lambda_star : kNaN;
  rep.notes.push_back("scalar Fickian closed form: lambda1=-mean(a), "
                      "lambda2=d*pi^2-sup(a), beta^2=4*||a-mean||^2");
  return out;
}

CertificateReport certify_scalar_small_omega(double eps, double omega) {
  if (!(eps > 0.0) || !(omega >= 0.0))
    throw InvalidParameter("need eps > 0 and omega >= 0");
  CertificateReport rep;
  rep.mode = CertMode::FullTheorem;
  rep.m1_star = 1.0;
  rep.m2_star = 1.0;
  rep.lambda1 = eps;
  rep.lambda2 = 2.0 * eps - 0.5 * omega;
  rep.beta = omega / std::sqrt(3.0);
  const SmallGain sg = small_gain(rep.lambda1, rep.lambda2, rep.beta, 1.0, 1.0);
  rep.sigma = sg.sigma;
  rep.condition_pass[0] = rep.lambda1 > 0.0;
  rep.condition_pass[1] = rep.lambda2 > 0.0;
  rep.condition_pass[2] = true;
  rep.condition_pass[3] = sg.pass;
  Eigen::VectorXd none;
  rep.worst[0] = {rep.lambda1, kNaN, none, "averaged-dynamics margin"};
  rep.worst[1] = {rep.lambda2, kNaN, none, "deviation-contraction margin"};
  rep.worst[2] = {rep.beta * rep.beta, kNaN, none, "coupling gain squared"};
  rep.worst[3] = {rep.lambda1 * rep.lambda2 - rep.sigma * rep.sigma, kNaN, none,
                  "small-gain slack lambda1*lambda2 - sigma^2"};
  rep.lambda_star = rep.certified() ? sg.lambda_star : kNaN;
  rep.notes.push_back(
      "small-frequency closed form: lambda1=eps, lambda2=2eps-omega/2, "
      "beta^2=omega^2/3");
  return rep;
}

DiagonalStability2x2 diagonal_stability_2x2(const Eigen::Matrix2d& B) {
  DiagonalStability2x2 out;
  out.minors[0] = -B(0, 0);
  out.minors[1] = -B(1, 1);
  out.minors[2] = B.determinant();
  out.pass = out.minors[0] > 0.0 && out.minors[1] > 0.0 && out.minors[2] > 0.0;

  auto objective = [&](double s) {
    Eigen::Vector2d g(std::exp(s), std::exp(-s));
    Eigen::Matrix2d GB = g.asDiagonal() * B;
    Eigen::Matrix2d S = 0.5 * (GB + GB.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(S);
    return -es.eigenvalues().maxCoeff() / (g[0] + g[1]);
  };
  double lo = -8.0, hi = 8.0, best_s = 0.0, best = -kInf;
  for (int round = 0; round < 4; ++round) {
    const int pts = 201;
    const double step = (hi - lo) / (pts - 1);
    for (int k = 0; k < pts; ++k) {
      const double s = lo + k * step;
      const double val = objective(s);
      if (val > best) {
        best = val;
        best_s = s;
      }
    }
    lo = best_s - step;
    hi = best_s + step;
  }
  out.gamma = Eigen::Vector2d(std::exp(best_s), std::exp(-best_s));
  out.margin = -metric_sym_max_eig(Eigen::MatrixXd(out.gamma.asDiagonal()),
                                   Eigen::MatrixXd(B));
  return out;
}

CertificateReport certify_linear_system(const LinearSystemInputs& in) {
  if (!in.grid || !in.A) throw InvalidSpec("linear certificate needs grid and A");
  SpeciesData sd = build_species(in.grid, in.diffusion, in.gamma, in.numeric_lambda);
  std::vector<Eigen::VectorXd> one_sample;
  one_sample.emplace_back(0);
  auto jac = [&](int node, const Eigen::VectorXd&) { return in.A(node); };
  CertificateReport rep = run_pipeline(in.grid, sd, in.M1, in.gamma, jac,
                                       one_sample, in.sampling);
  rep.notes.push_back(in.numeric_lambda
                          ? "transport floor: numeric second eigenvalue"
                          : "transport floor: analytic bound pi^2 min(d^2theta)/max(d^(2theta-1))");
  return rep;
}

CertificateReport certify_nonlinear(const NonlinearSystemInputs& in) {
  if (!in.grid || !in.f || !in.jac)
    throw InvalidSpec("nonlinear certificate needs grid, f and jac");
  const int ns = in.state_box.dim();
  if (ns < 1) throw InvalidParameter("state box must have positive dimension");
  std::vector<double> zero(ns, 0.0), out(ns);
  for (int i = 0; i < in.grid->n; ++i) {
    in.f(i, zero.data(), out.data());
    for (int s = 0; s < ns; ++s)
      if (std::abs(out[s]) > 1e-12)
        throw PremiseViolation("f(x,0) != 0 at node x=" +
                               std::to_string(in.grid->nodes[i]));
  }
  SpeciesData sd = build_species(in.grid, in.diffusion, in.gamma, in.numeric_lambda);
  CertificateReport rep =
      run_pipeline(in.grid, sd, in.M1, in.gamma, in.jac,
                   sample_box(in.state_box, in.sampling), in.sampling);
  rep.notes.push_back("jacobian sampled over state box; margins are "
                      "sound under the reported sampling density");
  return rep;
}

CertificateReport certify_hierarchical(const HierarchicalInputs& in) {
  if (in.mode == CertMode::FullTheorem)
    throw InvalidParameter("hierarchical certificate needs mode 1 or 2");
  if (!in.grid) throw InvalidSpec("hierarchical certificate needs a grid");
  SpeciesData sd = build_species(in.grid, in.diffusion, in.gamma, false);
  const int ns = (int)in.gamma.size();

  CertificateReport rep;
  rep.mode = in.mode;
  rep.sampling = in.sampling;
  rep.m1_star = min_eig_sym(in.M1);
  if (rep.m1_star <= 0.0) throw InvalidMetric("M1 must be positive definite");
  rep.m2_star = sd.m2_star;

  // Decoupling premise on probes.
  std::mt19937_64 rng(in.sampling.seed);
  if (in.mode == CertMode::Hierarchical1) {
    if (!in.g1_integral)
      throw InvalidSpec("mode 1 needs the g1 integral evaluator");
    for (int probe = 0; probe < 3; ++probe) {
      std::vector<ScalarField> zperp;
      for (int s = 0; s < ns; ++s) {
        Eigen::ArrayXd f = random_smooth_field(in.grid, rng, 6, 1.0);
        f -= sd.psi[s].values * integrate_values(*in.grid, f);
        zperp.emplace_back(in.grid, std::move(f));
      }
      Eigen::VectorXd g1 = in.g1_integral(zperp);
      if (g1.lpNorm<Eigen::Infinity>() > 1e-10)
        throw PremiseViolation("mode-1 premise failed: integral of g1 = " +
                               std::to_string(g1.lpNorm<Eigen::Infinity>()) +
                               " on probe " + std::to_string(probe));
    }
    rep.notes.push_back("mode-1 premise verified: integral of g1 vanishes on 3 "
                        "random mean-zero deviation probes");
  } else {
    if (!in.g2_field) throw InvalidSpec("mode 2 needs the g2 field evaluator");
    std::vector<Eigen::VectorXd> probes;
    probes.push_back(0.5 * (in.wbar_box.lo + in.wbar_box.hi));
    probes.push_back(in.wbar_box.lo);
    probes.push_back(in.wbar_box.hi);
    for (size_t probe = 0; probe < probes.size(); ++probe) {
      std::vector<ScalarField> g2 = in.g2_field(probes[probe]);
      for (int s = 0; s < (int)g2.size(); ++s) {
        Eigen::ArrayXd perp =
            g2[s].values - sd.psi[s].values * integrate(g2[s]);
        if (perp.abs().maxCoeff() > 1e-10)
          throw PremiseViolation("mode-2 premise failed: g2 deviation " +
                                 std::to_string(perp.abs().maxCoeff()) +
                                 " on probe " + std::to_string(probe));
      }
    }
    rep.notes.push_back("mode-2 premise verified: g2 has no deviation component "
                        "on box corner/center probes");
  }

  Margin l1 = lambda1_margin(in.M1, in.jac_f1, in.wbar_box, in.sampling);
  Margin l2 = lambda2_margin(in.gamma, sd.psi, sd.Lambda, in.jac_f2,
                             in.zperp_box, in.sampling);
  rep.lambda1 = l1.value;
  rep.lambda2 = l2.value;
  rep.beta = 0.0;
  rep.sigma = 0.0;
  rep.condition_pass[0] = l1.value > 0.0;
  rep.condition_pass[1] = l2.value > 0.0;
  rep.condition_pass[2] = true;
  rep.condition_pass[3] = true;
  rep.worst[0] = l1.worst;
  rep.worst[1] = l2.worst;
  rep.worst[2] = {0.0, kNaN, Eigen::VectorXd(), "not applicable (hierarchical)"};
  rep.worst[3] = {0.0, kNaN, Eigen::VectorXd(), "not applicable (hierarchical)"};
  rep.lambda_star =
      rep.certified() ? std::min(rep.lambda1, rep.lambda2) : kNaN;

  if (in.cross_jac) {
    double bound = 0.0;
    for (const auto& z : sample_box(in.cross_box, in.sampling))
      for (int i = 0; i < in.grid->n; ++i)
        bound = std::max(bound, spectral_norm(in.cross_jac(i, z)));
    std::ostringstream os;
    os << "cross-jacobian bounded by " << bound << " over its box";
    rep.notes.push_back(os.str());
  }
  return rep;
}

}  // namespace rdc
