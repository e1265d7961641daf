// Command dispatch behind the rdcontract binary: a flat run configuration
// (JSON file + flag overrides; flags win), deterministic sweep orchestration
// with a worker pool capped by RD_CONTRACT_THREADS, and the exit-code
// contract 0 = ok/certified, 2 = ran fine but not certified, 1 = error.
#pragma once

#include <cstdint>
#include <string>

namespace rdc {

struct RunConfig {
  std::string command;              // simulate | certify | sweep-omega |
                                    // sweep-zeta | bcf | eig | qss
  std::string model = "example31";  // example31 | example32 | translation

  // grid + integration protocol
  int n = 500;
  double dt = 0.02;
  double t_end = 100.0;
  double t_lo = 80.0;
  double t_hi = 100.0;
  int sample_every = 10;
  std::string ic = "default";  // default | uniform | ramp | random

  // scalar shear system
  double epsilon = 1e-2;
  double omega = 0.3;

  // two-species cross-activation system
  double zeta = 3.0;
  double r = 0.5;

  // translation model
  double K = 1.0;
  double chi_m = 1.0;
  double chi_r = 10.0;
  double chi_c = 1.0;
  double chi_scale = 1.0;
  double r_m = 0.4;
  double r_r = 0.2;
  double x_star = 0.5;
  double m_bar_T = 1.0;
  double R_bar_T = 1.0;
  double C_star = 4.0;

  // sweeps
  double omega_min = 1e-3;
  double omega_max = 1.0;
  int steps = 11;
  double r_min = 0.0;
  double r_max = 1.0;
  double zeta_lo = 1.0;
  double zeta_hi = 10.0;
  double bisect_tol = 0.05;

  // eigenreport
  double theta = 0.5;
  double d_const = 1.0;
  double d_volume_r = -1.0;  // >= 0: d(x) = d_const * v_r(x)

  // certificates
  int n_random = 64;
  bool small_omega = false;  // closed-form small-frequency certificate path

  std::string out_dir = ".";
  std::uint64_t seed = 20240817;
};

// Canonical JSON of every field (keys sorted); input to the config hash.
std::string config_to_json(const RunConfig& cfg);

// Applies the fields present in a JSON object; unknown keys or wrong types
// throw InvalidSpec (malformed config).
void apply_json_text(RunConfig& cfg, const std::string& text);

// Number of sweep workers: hardware concurrency capped by RD_CONTRACT_THREADS
// and by the job count.
int worker_count(int jobs);

// Dispatches cfg.command.  Returns 0 (ok / certified) or 2 (certificate
// evaluated fine but did not pass).  Errors propagate as exceptions.
int run(const RunConfig& cfg);

}  // namespace rdc
