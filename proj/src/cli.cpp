#include "rdcontract/cli.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "rdcontract/certificates.hpp"
#include "rdcontract/errors.hpp"
#include "rdcontract/io.hpp"
#include "rdcontract/models.hpp"
#include "rdcontract/simulate.hpp"

namespace rdc {
namespace {

constexpr double kFlatTol = 1e-4;  // |slope| below this is "neither sign"

nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = c.command;
  j["model"] = c.model;
  j["n"] = c.n;
  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["t_lo"] = c.t_lo;
  j["t_hi"] = c.t_hi;
  j["sample_every"] = c.sample_every;
  j["ic"] = c.ic;
  j["epsilon"] = c.epsilon;
  j["omega"] = c.omega;
  j["zeta"] = c.zeta;
  j["r"] = c.r;
  j["K"] = c.K;
  j["chi_m"] = c.chi_m;
  j["chi_r"] = c.chi_r;
  j["chi_c"] = c.chi_c;
  j["chi_scale"] = c.chi_scale;
  j["r_m"] = c.r_m;
  j["r_r"] = c.r_r;
  j["x_star"] = c.x_star;
  j["m_bar_T"] = c.m_bar_T;
  j["R_bar_T"] = c.R_bar_T;
  j["C_star"] = c.C_star;
  j["omega_min"] = c.omega_min;
  j["omega_max"] = c.omega_max;
  j["steps"] = c.steps;
  j["r_min"] = c.r_min;
  j["r_max"] = c.r_max;
  j["zeta_lo"] = c.zeta_lo;
  j["zeta_hi"] = c.zeta_hi;
  j["bisect_tol"] = c.bisect_tol;
  j["theta"] = c.theta;
  j["d_const"] = c.d_const;
  j["d_volume_r"] = c.d_volume_r;
  j["n_random"] = c.n_random;
  j["small_omega"] = c.small_omega;
  j["out_dir"] = c.out_dir;
  j["seed"] = c.seed;
  return j;
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

void parallel_for(int jobs, const std::function<void(int)>& fn) {
  const int workers = worker_count(jobs);
  if (workers <= 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= jobs) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

using IcFn = std::function<std::vector<Eigen::ArrayXd>(const RDSystem&)>;

IcFn make_ic(const RunConfig& cfg, const std::string& fallback) {
  std::string mode = cfg.ic == "default" ? fallback : cfg.ic;
  if (mode == "uniform") return ic_uniform_one;
  if (mode == "ramp") return ic_ramp;
  if (mode == "random") {
    const std::uint64_t seed = cfg.seed;
    return [seed](const RDSystem& sys) {
      std::mt19937_64 rng(seed);
      std::vector<Eigen::ArrayXd> z;
      for (int s = 0; s < sys.reaction.species; ++s)
        z.push_back(1.0 + random_smooth_field(sys.grid, rng, 6, 0.5));
      return z;
    };
  }
  throw InvalidParameter("unknown ic mode: " + mode);
}

TranslationParams translation_params(const RunConfig& cfg) {
  TranslationParams p;
  p.K = cfg.K;
  p.chi_m = cfg.chi_m;
  p.chi_r = cfg.chi_r;
  p.chi_c = cfg.chi_c;
  p.chi_scale = cfg.chi_scale;
  p.r_m = cfg.r_m;
  p.r_r = cfg.r_r;
  p.x_star = cfg.x_star;
  p.m_bar_T = cfg.m_bar_T;
  p.R_bar_T = cfg.R_bar_T;
  p.C_star = cfg.C_star;
  return p;
}

// Constant split with c_bar = min(totals)/4 so both conservation sums start
// exactly at the configured totals.
std::vector<Eigen::ArrayXd> translation_ic(const TranslationModel& tm,
                                           const RunConfig& cfg) {
  const int n = tm.system.grid->n;
  const double c0 = 0.25 * std::min(cfg.m_bar_T, cfg.R_bar_T);
  Eigen::ArrayXd m = Eigen::ArrayXd::Constant(n, cfg.m_bar_T - c0);
  Eigen::ArrayXd R = Eigen::ArrayXd::Constant(n, cfg.R_bar_T - c0);
  Eigen::ArrayXd c = Eigen::ArrayXd::Constant(n, c0);
  if (cfg.ic == "random") {
    std::mt19937_64 rng(cfg.seed);
    m = (m + random_smooth_field(tm.system.grid, rng, 6, 0.1)).max(0.0);
    R = (R + random_smooth_field(tm.system.grid, rng, 6, 0.1)).max(0.0);
  } else if (cfg.ic != "default" && cfg.ic != "uniform") {
    throw InvalidParameter("translation ic must be default, uniform or random");
  }
  return {m, R, c};
}

double classify(double slope) {
  if (std::abs(slope) <= kFlatTol) return 0.0;
  return slope < 0.0 ? -1.0 : 1.0;
}

SlopeProtocol protocol(const RunConfig& cfg, const IcFn& ic) {
  SlopeProtocol p;
  p.t_end = cfg.t_end;
  p.dt = cfg.dt;
  p.t_lo = cfg.t_lo;
  p.t_hi = cfg.t_hi;
  p.sample_every = cfg.sample_every;
  p.ic = ic;
  return p;
}

int cmd_simulate(const RunConfig& cfg, const GridPtr& grid, const OutputHeader& hdr) {
  IntegrateOptions opt;
  opt.dt = cfg.dt;
  opt.t_end = cfg.t_end;
  opt.sample_every = cfg.sample_every;
  Trajectory traj;
  if (cfg.model == "example31") {
    Example31 ex = build_example_3_1(cfg.epsilon, cfg.omega, grid);
    traj = integrate_system(ex.system, make_ic(cfg, "uniform")(ex.system), opt);
  } else if (cfg.model == "example32") {
    Example32 ex = build_example_3_2(cfg.zeta, cfg.r, grid);
    traj = integrate_system(ex.system, make_ic(cfg, "ramp")(ex.system), opt);
  } else if (cfg.model == "translation") {
    TranslationModel tm = build_translation_model(translation_params(cfg), grid);
    std::vector<Eigen::ArrayXd> z0 = translation_ic(tm, cfg);
    invariant_set_bounds(tm, &z0);  // reject initial states outside the set
    traj = integrate_system(tm.system, z0, opt);
  } else {
    throw InvalidParameter("unknown model: " + cfg.model);
  }
  write_trajectory_csv(traj, out_path(cfg, "trajectory.csv"), hdr);
  write_norms_csv(traj, out_path(cfg, "norms.csv"), hdr);
  return 0;
}

int cmd_certify(const RunConfig& cfg, const GridPtr& grid, const OutputHeader& hdr) {
  SamplingConfig sampling;
  sampling.n_random = cfg.n_random;
  sampling.seed = cfg.seed;
  nlohmann::json j;
  j["config_hash"] = hash_hex(hdr.config_hash);
  j["seed"] = hdr.seed;
  j["model"] = cfg.model;
  const CertificateReport* rep = nullptr;
  ScalarFickianBreakdown br;
  CertificateReport own;
  Example32Certificate c32;
  if (cfg.model == "example31") {
    if (cfg.small_omega) {
      own = certify_scalar_small_omega(cfg.epsilon, cfg.omega);
      rep = &own;
      j["epsilon"] = cfg.epsilon;
      j["omega"] = cfg.omega;
    } else {
      Example31 ex = build_example_3_1(cfg.epsilon, cfg.omega, grid);
      br = certify_scalar_fickian(ex.a, ex.d);
      rep = &br.report;
      j["breakdown"] = {{"a_bar", br.a_bar},
                        {"a_sup", br.a_sup},
                        {"a_perp_sq", br.a_perp_sq},
                        {"d", br.d}};
    }
  } else if (cfg.model == "example32") {
    c32 = certify_example_3_2(cfg.zeta, cfg.r, grid, sampling);
    rep = &c32.report;
    j["nu"] = c32.nu;
    j["two_over_nu"] = 2.0 / c32.nu;
    j["zeta"] = cfg.zeta;
    j["r"] = cfg.r;
    j["Lambda"] = {c32.Lambda[0], c32.Lambda[1]};
    j["M1"] = {{c32.M1(0, 0), c32.M1(0, 1)}, {c32.M1(1, 0), c32.M1(1, 1)}};
    j["stability"] = {{"pass", c32.stability.pass},
                      {"gamma", {c32.stability.gamma[0], c32.stability.gamma[1]}},
                      {"margin", c32.stability.margin},
                      {"minors", {c32.stability.minors[0], c32.stability.minors[1],
                                  c32.stability.minors[2]}}};
  } else if (cfg.model == "translation") {
    TranslationModel tm = build_translation_model(translation_params(cfg), grid);
    TranslationBounds b = invariant_set_bounds(tm);
    own = translation_certificate(tm, b);
    rep = &own;
    j["bcf"] = tm.bcf;
    j["bounds"] = {
        {"vm_max", b.vm_max},        {"vm_min", b.vm_min},
        {"vr_max", b.vr_max},        {"vr_min", b.vr_min},
        {"vc_max", b.vc_max},        {"vc_min", b.vc_min},
        {"psi_max", b.psi_max},      {"psi_min", b.psi_min},
        {"m_star", b.m_star},        {"R_star", b.R_star},
        {"m_perp_star", b.m_perp_star}, {"R_perp_star", b.R_perp_star},
        {"eta_max", b.eta_max},      {"beta_u", b.beta_u},
        {"beta_u_eta", b.beta_u_eta}, {"beta_h", b.beta_h}};
  } else {
    throw InvalidParameter("unknown model: " + cfg.model);
  }
  j["report"] = nlohmann::json::parse(rep->to_json());
  write_text_file(out_path(cfg, "certificate.json"), j.dump(2) + "\n");
  if (rep->certified()) {
    std::cout << "certified lambda_star=" << format_g17(rep->lambda_star) << "\n";
    return 0;
  }
  std::cout << "not-certified\n";
  return 2;
}

int cmd_sweep_omega(const RunConfig& cfg, const GridPtr& grid, const OutputHeader& hdr) {
  if (cfg.steps < 2) throw InvalidParameter("sweep needs steps >= 2");
  if (!(cfg.omega_min > 0.0) || !(cfg.omega_max > cfg.omega_min))
    throw InvalidParameter("sweep-omega needs 0 < omega_min < omega_max");
  std::vector<double> omegas(cfg.steps), slopes(cfg.steps);
  const double ratio = cfg.omega_max / cfg.omega_min;
  for (int i = 0; i < cfg.steps; ++i)
    omegas[i] = cfg.omega_min * std::pow(ratio, double(i) / (cfg.steps - 1));
  const SlopeProtocol proto = protocol(cfg, make_ic(cfg, "uniform"));
  parallel_for(cfg.steps, [&](int i) {
    Example31 ex = build_example_3_1(cfg.epsilon, omegas[i], grid);
    slopes[i] = measured_slope(ex.system, proto);
  });
  Series s;
  s.columns = {"parameter", "slope", "classification"};
  for (int i = 0; i < cfg.steps; ++i)
    s.rows.push_back({omegas[i], slopes[i], classify(slopes[i])});
  emit_plot_data(s, out_path(cfg, "sweep_omega.csv"), hdr);
  return 0;
}

int cmd_sweep_zeta(const RunConfig& cfg, const GridPtr& grid, const OutputHeader& hdr) {
  if (cfg.steps < 1) throw InvalidParameter("sweep needs steps >= 1");
  if (!(cfg.r_max >= cfg.r_min)) throw InvalidParameter("need r_max >= r_min");
  std::vector<double> rs(cfg.steps), zcr(cfg.steps), bound(cfg.steps);
  for (int i = 0; i < cfg.steps; ++i)
    rs[i] = cfg.steps == 1
                ? cfg.r_min
                : cfg.r_min + (cfg.r_max - cfg.r_min) * double(i) / (cfg.steps - 1);
  const SlopeProtocol proto = protocol(cfg, make_ic(cfg, "ramp"));
  parallel_for(cfg.steps, [&](int i) {
    VolumeProfile vr = available_volume(rs[i], 0.5, grid);
    const double nu = vr.v.values.square().minCoeff() / vr.v.values.maxCoeff();
    bound[i] = 2.0 / nu;
    CriticalSearch cs = critical_parameter(
        [&](double z) { return build_example_3_2(z, rs[i], grid).system; },
        cfg.zeta_lo, cfg.zeta_hi, proto, cfg.bisect_tol);
    zcr[i] = cs.p_cr;
  });
  Series s;
  s.columns = {"r", "zeta_cr", "bound_2_over_nu"};
  for (int i = 0; i < cfg.steps; ++i) s.rows.push_back({rs[i], zcr[i], bound[i]});
  emit_plot_data(s, out_path(cfg, "sweep_zeta.csv"), hdr);
  return 0;
}

int cmd_bcf(const RunConfig& cfg, const GridPtr& grid, const OutputHeader& hdr) {
  VolumeProfile vm = available_volume(cfg.r_m, cfg.x_star, grid);
  VolumeProfile vr = available_volume(cfg.r_r, cfg.x_star, grid);
  const double b = compute_bcf(vm, vr);
  std::cout << format_g17(b) << "\n";
  nlohmann::json j;
  j["config_hash"] = hash_hex(hdr.config_hash);
  j["seed"] = hdr.seed;
  j["r_m"] = cfg.r_m;
  j["r_r"] = cfg.r_r;
  j["x_star"] = cfg.x_star;
  j["n"] = cfg.n;
  j["bcf"] = b;
  write_text_file(out_path(cfg, "bcf.json"), j.dump(2) + "\n");
  return 0;
}

int cmd_eig(const RunConfig& cfg, const GridPtr& grid, const OutputHeader& hdr) {
  ScalarField d;
  if (cfg.d_volume_r >= 0.0) {
    VolumeProfile vp = available_volume(cfg.d_volume_r, cfg.x_star, grid);
    d = ScalarField(grid, cfg.d_const * vp.v.values);
  } else {
    d = constant_field(grid, cfg.d_const);
  }
  OperatorAssembly op(grid, SpeciesDiffusion{cfg.theta, d});
  EigReport rep = op.eig_report();
  nlohmann::json j;
  j["config_hash"] = hash_hex(hdr.config_hash);
  j["seed"] = hdr.seed;
  j["theta"] = rep.theta;
  j["n"] = rep.n;
  j["lambda_bound"] = rep.lambda_bound;
  j["lambda_numeric"] = rep.lambda_numeric;
  j["zero_residual"] = rep.zero_residual;
  j["lambda_star"] = rep.lambda_star;
  std::cout << j.dump(2) << "\n";
  write_text_file(out_path(cfg, "eig.json"), j.dump(2) + "\n");
  return 0;
}

int cmd_qss(const RunConfig& cfg, const GridPtr& grid, const OutputHeader& hdr) {
  TranslationModel tm = build_translation_model(translation_params(cfg), grid);
  std::vector<Eigen::ArrayXd> z0 = translation_ic(tm, cfg);
  invariant_set_bounds(tm, &z0);
  IntegrateOptions opt;
  opt.dt = cfg.dt;
  opt.t_end = cfg.t_end;
  opt.sample_every = cfg.sample_every;
  Trajectory traj = integrate_system(tm.system, z0, opt);
  Series s;
  s.columns = {"t",          "e_bar",       "qss_target",  "m_bar",
               "R_bar",      "c_bar",       "m_perp_norm", "R_perp_norm",
               "c_perp_norm"};
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    QssErrors q = qss_errors(tm, traj.states[k]);
    s.rows.push_back({traj.times[k], q.e_bar, q.qss_target, q.m_bar, q.R_bar,
                      q.c_bar, q.m_perp_norm, q.R_perp_norm, q.c_perp_norm});
  }
  emit_plot_data(s, out_path(cfg, "qss.csv"), hdr);
  return 0;
}

}  // namespace

std::string config_to_json(const RunConfig& cfg) { return config_json(cfg).dump(); }

void apply_json_text(RunConfig& cfg, const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw InvalidSpec(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw InvalidSpec("config must be a JSON object");
  for (const auto& [key, val] : j.items()) {
    try {
      if (key == "command") cfg.command = val.get<std::string>();
      else if (key == "model") cfg.model = val.get<std::string>();
      else if (key == "n") cfg.n = val.get<int>();
      else if (key == "dt") cfg.dt = val.get<double>();
      else if (key == "t_end") cfg.t_end = val.get<double>();
      else if (key == "t_lo") cfg.t_lo = val.get<double>();
      else if (key == "t_hi") cfg.t_hi = val.get<double>();
      else if (key == "sample_every") cfg.sample_every = val.get<int>();
      else if (key == "ic") cfg.ic = val.get<std::string>();
      else if (key == "epsilon") cfg.epsilon = val.get<double>();
      else if (key == "omega") cfg.omega = val.get<double>();
      else if (key == "zeta") cfg.zeta = val.get<double>();
      else if (key == "r") cfg.r = val.get<double>();
      else if (key == "K") cfg.K = val.get<double>();
      else if (key == "chi_m") cfg.chi_m = val.get<double>();
      else if (key == "chi_r") cfg.chi_r = val.get<double>();
      else if (key == "chi_c") cfg.chi_c = val.get<double>();
      else if (key == "chi_scale") cfg.chi_scale = val.get<double>();
      else if (key == "r_m") cfg.r_m = val.get<double>();
      else if (key == "r_r") cfg.r_r = val.get<double>();
      else if (key == "x_star") cfg.x_star = val.get<double>();
      else if (key == "m_bar_T") cfg.m_bar_T = val.get<double>();
      else if (key == "R_bar_T") cfg.R_bar_T = val.get<double>();
      else if (key == "C_star") cfg.C_star = val.get<double>();
      else if (key == "omega_min") cfg.omega_min = val.get<double>();
      else if (key == "omega_max") cfg.omega_max = val.get<double>();
      else if (key == "steps") cfg.steps = val.get<int>();
      else if (key == "r_min") cfg.r_min = val.get<double>();
      else if (key == "r_max") cfg.r_max = val.get<double>();
      else if (key == "zeta_lo") cfg.zeta_lo = val.get<double>();
      else if (key == "zeta_hi") cfg.zeta_hi = val.get<double>();
      else if (key == "bisect_tol") cfg.bisect_tol = val.get<double>();
      else if (key == "theta") cfg.theta = val.get<double>();
      else if (key == "d_const") cfg.d_const = val.get<double>();
      else if (key == "d_volume_r") cfg.d_volume_r = val.get<double>();
      else if (key == "n_random") cfg.n_random = val.get<int>();
      else if (key == "small_omega") cfg.small_omega = val.get<bool>();
      else if (key == "out_dir") cfg.out_dir = val.get<std::string>();
      else if (key == "seed") cfg.seed = val.get<std::uint64_t>();
      else throw InvalidSpec("unknown config key: " + key);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidSpec("config value for '" + key + "': " + e.what());
    }
  }
}

int worker_count(int jobs) {
  const unsigned hw = std::thread::hardware_concurrency();
  int cap = hw ? int(hw) : 1;
  if (const char* env = std::getenv("RD_CONTRACT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) cap = int(std::min<long>(cap, v));
  }
  return std::max(1, std::min(cap, jobs));
}

int run(const RunConfig& cfg) {
  OutputHeader hdr;
  hdr.config_hash = fnv1a64(config_to_json(cfg));
  hdr.seed = cfg.seed;
  GridPtr grid = make_uniform_grid(cfg.n);
  if (cfg.command == "simulate") return cmd_simulate(cfg, grid, hdr);
  if (cfg.command == "certify") return cmd_certify(cfg, grid, hdr);
  if (cfg.command == "sweep-omega") return cmd_sweep_omega(cfg, grid, hdr);
  if (cfg.command == "sweep-zeta") return cmd_sweep_zeta(cfg, grid, hdr);
  if (cfg.command == "bcf") return cmd_bcf(cfg, grid, hdr);
  if (cfg.command == "eig") return cmd_eig(cfg, grid, hdr);
  if (cfg.command == "qss") return cmd_qss(cfg, grid, hdr);
  throw InvalidParameter("unknown command: " + cfg.command);
}

}  // namespace rdc
