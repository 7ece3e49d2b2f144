// helium-gl command line: time evolution, phase-diagram sweeps, the invariant
// check suite, and the dual-formulation gauge comparison.

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hegl/check.hpp"
#include "hegl/config.hpp"
#include "hegl/diagnostics.hpp"
#include "hegl/dynamics.hpp"
#include "hegl/gauge.hpp"
#include "hegl/phase_diagram.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitInvariant = 3;

hegl::Config load_or_exit(const std::string& path) {
  try {
    hegl::Config c = hegl::load_config(path);
    if (c.threads > 0) omp_set_num_threads(c.threads);
    const auto bad = hegl::validate_params(c.params, 0.1, 10.0);
    if (!bad.empty()) {
      for (const auto& b : bad) std::cerr << "config: " << b << "\n";
      std::exit(kExitConfig);
    }
    return c;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    std::exit(kExitConfig);
  }
}

std::string out_path(const hegl::Config& c, const std::string& name) {
  std::filesystem::create_directories(c.out_dir);
  return (std::filesystem::path(c.out_dir) / (c.out_prefix + "-" + name)).string();
}

int cmd_simulate(const std::string& config_path) {
  hegl::Config c = load_or_exit(config_path);
  try {
    hegl::FieldState s = hegl::new_state(c.grid, c.init, c.params);
    hegl::solve_phi_s(s, c.params, s.phi_s);
    hegl::apply_bcs(s, c.params);

    std::ofstream series;
    if (c.out_series) {
      series.open(out_path(c, "series.csv"));
      hegl::write_series_header(series);
    }
    hegl::Stepper st(c.grid, c.step, c.params);
    const long nsteps = std::lround(c.step.t_end / c.step.dt);
    int snap_id = 0;
    for (long k = 0; k < nsteps; ++k) {
      hegl::StepResult out = st.step(s);
      s = std::move(out.state);
      if ((k + 1) % c.step.record_every == 0) {
        if (c.out_series) hegl::write_series_row(series, out.report);
        if (c.out_snapshots) {
          char name[64];
          std::snprintf(name, sizeof name, "snap-%05d.csv", snap_id++);
          hegl::write_snapshot(s, out_path(c, name));
        }
      }
      if (out.report.max_phi_sq > 1.0 + c.step.tol_phase)
        std::cerr << "warning: phi^2 exceeded 1 + tol_phase: " << out.report.max_phi_sq
                  << " at t = " << s.t << "\n";
    }
    hegl::write_snapshot(s, out_path(c, "final.csv"));
    std::cout << "simulate: " << nsteps << " steps to t = " << s.t << "\n";
    return kExitOk;
  } catch (const hegl::StepFailure& e) {
    std::cerr << "numerical failure (stage " << e.stage << ", field " << e.field
              << "): " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int cmd_phase_diagram(const std::string& config_path) {
  hegl::Config c = load_or_exit(config_path);
  try {
    const auto th = hegl::linspace(c.sweep_theta_min, c.sweep_theta_max, c.sweep_theta_n);
    const auto pp = hegl::linspace(c.sweep_p_min, c.sweep_p_max, c.sweep_p_n);
    const hegl::SweepResult r = hegl::sweep(th, pp, c.sweep_vs2, c.sweep_vn2, c.params);
    hegl::write_phase_map_csv(r, out_path(c, "phase-map.csv"));
    hegl::write_lambda_line_csv(r, out_path(c, "lambda-line.csv"));
    if (r.line.found) {
      if (r.line.vertical)
        std::cout << "lambda line: vertical at theta = " << r.line.theta_line.front() << "\n";
      else
        std::cout << "lambda line: dp/dtheta = " << r.line.slope << "\n";
    } else {
      std::cout << "lambda line: no zero contour in the sweep window\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int cmd_check(const std::string& config_path) {
  hegl::Config c = load_or_exit(config_path);
  const hegl::CheckResult res = hegl::run_check(c.params, c.seed, c.check_quick);
  for (const auto& p : res.passed) std::cout << "pass  " << p << "\n";
  for (const auto& v : res.violations) std::cout << "FAIL  " << v << "\n";
  std::cout << (res.ok() ? "check: all invariants hold\n" : "check: violations found\n");
  return res.ok() ? kExitOk : kExitInvariant;
}

int cmd_gauge_compare(const std::string& config_path) {
  hegl::Config c = load_or_exit(config_path);
  try {
    hegl::FieldState s = hegl::new_state(c.grid, c.init, c.params);
    hegl::solve_phi_s(s, c.params, s.phi_s);
    hegl::apply_bcs(s, c.params);
    const hegl::GaugeField chi1 = hegl::GaugeField::zero();
    const hegl::GaugeField chi2 =
        hegl::GaugeField::cosine_x(c.gauge_chi_amp, c.gauge_chi_mode, c.grid.lx());

    const auto rows = hegl::gauge_dual_run(s, chi1, chi2, c.gauge_steps, c.step, c.params);
    std::ofstream os(out_path(c, "gauge-compare.csv"));
    os << "t,d_n,d_vs,d_phi_s,d_vn,d_p,d_rho,d_theta\n";
    char buf[256];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    r.t, r.delta.n, r.delta.vs, r.delta.phi_s, r.delta.vn, r.delta.p,
                    r.delta.rho, r.delta.theta);
      os << buf;
    }
    const hegl::ComplexState c2 = hegl::gauge_forward(s, chi2, c.params);
    hegl::StepConfig idcfg = c.step;
    const auto idrep = hegl::check_identities(s, c2, chi2, c.params, idcfg);
    std::cout << "gauge-compare: max observable gap after " << c.gauge_steps
              << " steps = " << (rows.empty() ? 0.0 : rows.back().delta.max())
              << ", identity residual = " << idrep.max_residual() << " ("
              << idrep.excluded_cells << " cells excluded)\n";
    return kExitOk;
  } catch (const hegl::StepFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"helium-gl: two-component Ginzburg-Landau superfluid simulator"};
  app.require_subcommand(1);

  std::string config_path;
  auto* sim = app.add_subcommand("simulate", "time evolution with diagnostics");
  sim->add_option("config", config_path, "configuration file")->required();
  auto* pd = app.add_subcommand("phase-diagram", "equilibrium sweep and lambda line");
  pd->add_option("config", config_path, "configuration file")->required();
  auto* chk = app.add_subcommand("check", "invariant suite (nonzero exit on violation)");
  chk->add_option("config", config_path, "configuration file")->required();
  auto* gc = app.add_subcommand("gauge-compare", "dual-formulation residuals");
  gc->add_option("config", config_path, "configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitConfig : kExitConfig;
  }

  if (sim->parsed()) return cmd_simulate(config_path);
  if (pd->parsed()) return cmd_phase_diagram(config_path);
  if (chk->parsed()) return cmd_check(config_path);
  if (gc->parsed()) return cmd_gauge_compare(config_path);
  return kExitConfig;
}
