#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdcontract/cli.hpp"
#include "rdcontract/errors.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rdc::IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void add_common(CLI::App* cmd, rdc::RunConfig& cfg) {
  cmd->add_option("--n", cfg.n, "grid nodes");
  cmd->add_option("--dt", cfg.dt, "time step");
  cmd->add_option("--t-end", cfg.t_end, "integration horizon");
  cmd->add_option("--t-lo", cfg.t_lo, "slope window start");
  cmd->add_option("--t-hi", cfg.t_hi, "slope window end");
  cmd->add_option("--sample-every", cfg.sample_every, "steps between samples");
  cmd->add_option("--ic", cfg.ic, "initial condition: default|uniform|ramp|random");
  cmd->add_option("--seed", cfg.seed, "seed recorded in every output");
  cmd->add_option("--out-dir", cfg.out_dir, "output directory");
}

void add_models(CLI::App* cmd, rdc::RunConfig& cfg) {
  cmd->add_option("--model", cfg.model, "example31|example32|translation");
  cmd->add_option("--epsilon", cfg.epsilon, "scalar system decay scale");
  cmd->add_option("--omega", cfg.omega, "scalar system spatial frequency");
  cmd->add_option("--zeta", cfg.zeta, "two-species transport strength");
  cmd->add_option("--r", cfg.r, "gyration radius of the transported species");
  cmd->add_option("--K", cfg.K, "dissociation constant");
  cmd->add_option("--chi-m", cfg.chi_m, "mRNA diffusivity");
  cmd->add_option("--chi-r", cfg.chi_r, "ribosome diffusivity");
  cmd->add_option("--chi-c", cfg.chi_c, "complex diffusivity");
  cmd->add_option("--chi-scale", cfg.chi_scale, "common diffusivity multiplier");
  cmd->add_option("--r-m", cfg.r_m, "mRNA gyration radius");
  cmd->add_option("--r-r", cfg.r_r, "ribosome gyration radius");
  cmd->add_option("--x-star", cfg.x_star, "nucleoid center");
  cmd->add_option("--m-bar-T", cfg.m_bar_T, "total mRNA");
  cmd->add_option("--R-bar-T", cfg.R_bar_T, "total ribosome");
  cmd->add_option("--C-star", cfg.C_star, "invariant set size");
}

}  // namespace

int main(int argc, char** argv) {
  rdc::RunConfig cfg;

  // The JSON config loads before flag parsing so that flags win.
  std::vector<std::string> args;
  std::string config_path;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config") {
      if (i + 1 >= argc) {
        std::cerr << "error: --config needs a path\n";
        return 1;
      }
      config_path = argv[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      config_path = a.substr(9);
    } else {
      args.push_back(a);
    }
  }

  CLI::App app{"reaction-transport simulation and contraction certificates"};
  app.require_subcommand(1);

  CLI::App* sim = app.add_subcommand("simulate", "integrate a model, write trajectory + norms CSV");
  add_common(sim, cfg);
  add_models(sim, cfg);

  CLI::App* cert = app.add_subcommand("certify", "evaluate the contraction certificate, write JSON");
  add_common(cert, cfg);
  add_models(cert, cfg);
  cert->add_option("--n-random", cfg.n_random, "random certificate samples");
  cert->add_flag("--small-omega", cfg.small_omega, "closed-form small-frequency path");

  CLI::App* swo = app.add_subcommand("sweep-omega", "slope vs frequency sweep of the scalar system");
  add_common(swo, cfg);
  swo->add_option("--epsilon", cfg.epsilon, "scalar system decay scale");
  swo->add_option("--omega-min", cfg.omega_min, "sweep start (log spacing)");
  swo->add_option("--omega-max", cfg.omega_max, "sweep end");
  swo->add_option("--steps", cfg.steps, "sweep points");

  CLI::App* swz = app.add_subcommand("sweep-zeta", "critical transport strength vs gyration radius");
  add_common(swz, cfg);
  swz->add_option("--r-min", cfg.r_min, "radius sweep start");
  swz->add_option("--r-max", cfg.r_max, "radius sweep end");
  swz->add_option("--steps", cfg.steps, "sweep points");
  swz->add_option("--zeta-lo", cfg.zeta_lo, "bisection lower endpoint");
  swz->add_option("--zeta-hi", cfg.zeta_hi, "bisection upper endpoint");
  swz->add_option("--tol", cfg.bisect_tol, "bisection width tolerance");

  CLI::App* bcf = app.add_subcommand("bcf", "binding correction factor of two volume profiles");
  bcf->add_option("--n", cfg.n, "grid nodes");
  bcf->add_option("--r-m", cfg.r_m, "first gyration radius");
  bcf->add_option("--r-r", cfg.r_r, "second gyration radius");
  bcf->add_option("--x-star", cfg.x_star, "nucleoid center");
  bcf->add_option("--seed", cfg.seed, "seed recorded in every output");
  bcf->add_option("--out-dir", cfg.out_dir, "output directory");

  CLI::App* eig = app.add_subcommand("eig", "transport spectral gap vs the analytic floor");
  eig->add_option("--n", cfg.n, "grid nodes");
  eig->add_option("--theta", cfg.theta, "drift exponent");
  eig->add_option("--d-const", cfg.d_const, "constant diffusivity (or scale)");
  eig->add_option("--d-volume-r", cfg.d_volume_r, "if >= 0, d(x) = d-const * v_r(x)");
  eig->add_option("--x-star", cfg.x_star, "nucleoid center for the profile");
  eig->add_option("--seed", cfg.seed, "seed recorded in every output");
  eig->add_option("--out-dir", cfg.out_dir, "output directory");

  CLI::App* qss = app.add_subcommand("qss", "translation model quasi-steady-state error series");
  add_common(qss, cfg);
  add_models(qss, cfg);

  if (!config_path.empty()) {
    try {
      rdc::apply_json_text(cfg, slurp(config_path));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n\n" << app.help();
      return 1;
    }
  }

  std::vector<const char*> cargs;
  cargs.push_back(argv[0]);
  for (const std::string& s : args) cargs.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    return rdc::run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
