#pragma once

#include <map>
#include <string>
#include <vector>

#include "hegl/dynamics.hpp"
#include "hegl/state.hpp"

namespace hegl {

// Flat `key = value` configuration with [section] headers. Unknown sections
// or keys are hard errors so a misspelled constitutive constant cannot pass
// silently.
//
// Sections and keys:
//   [params]  tau kappa nu lambda theta_lambda c0 k0_const k0_slope eps_reg
//             g r omega_bc                  (g, omega_bc: one or three numbers)
//   [grid]    dim nx ny hx hy
//   [step]    dt t_end projection_tol material_derivative record_every
//             tol_phase eps_mass pin seed threads
//   [init]    kind phi theta rho p vsx vsy vsz vnx vny vnz profile
//             profile_amp profile_width snapshot
//   [output]  dir prefix series snapshots
//   [sweep]   theta_min theta_max theta_n p_min p_max p_n vs2 vn2
//   [gauge]   chi_amp chi_mode steps
//   [check]   quick
struct Config {
  ModelParams params;
  Grid grid = Grid::make_1d(64, 1.0 / 64);
  StepConfig step;
  InitSpec init;
  std::string out_dir = ".";
  std::string out_prefix = "run";
  bool out_series = true;
  bool out_snapshots = true;
  unsigned long seed = 1;
  int threads = 0;  // 0: library default
  // sweep
  double sweep_theta_min = 0.5, sweep_theta_max = 3.0;
  int sweep_theta_n = 200;
  double sweep_p_min = 0.0, sweep_p_max = 3.0;
  int sweep_p_n = 50;
  double sweep_vs2 = 0.0, sweep_vn2 = 0.0;
  // gauge comparison
  double gauge_chi_amp = 0.3;
  int gauge_chi_mode = 1;
  int gauge_steps = 100;
  // check
  bool check_quick = false;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Config parse_config_text(const std::string& text);
Config load_config(const std::string& path);

}  // namespace hegl
