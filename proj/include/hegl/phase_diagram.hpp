#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hegl/params.hpp"

namespace hegl {

// Equilibrium order parameter of the homogeneous steady states over the
// (theta, p) plane plus the kinetic tilt, and extraction of the transition
// line theta + lambda p = theta_lambda.

double equilibrium_phase(double theta, double p, double vs2, double vn2,
                         const ModelParams& prm);

struct PhaseMapPoint {
  double theta, p, phi_eq;
};

struct LambdaLine {
  // transition temperature per pressure sample; empty where the contour
  // leaves the theta window
  std::vector<double> p;
  std::vector<double> theta_line;
  bool found = false;
  // least-squares fit of p against theta_line: p = slope * theta + icept
  // (slope is -1/lambda for lambda > 0); vertical true when theta_line is
  // p-independent (lambda = 0)
  double slope = 0.0;
  double intercept = 0.0;
  bool vertical = false;
};

struct SweepResult {
  std::vector<double> theta_grid, p_grid;
  std::vector<PhaseMapPoint> map;  // row-major over (p, theta)
  LambdaLine line;
};

// Uniform prescribed p (the equilibrium states have v_n = 0, so eq4 fixes p
// only up to hydrostatics; the phase diagram treats p as an independent
// axis). vs2/vn2 shift the line per the critical-velocity condition.
SweepResult sweep(const std::vector<double>& theta_grid, const std::vector<double>& p_grid,
                  double vs2, double vn2, const ModelParams& prm);

// Homogeneous relaxation tau phi_dot = -theta_l phi (phi^2 - 1) - m phi
// integrated with fixed-step midpoint; terminal value approaches
// equilibrium_phase. Returns sampled (t, phi).
struct Trajectory {
  std::vector<double> t, phi;
};
Trajectory relax_to_equilibrium(double theta, double p, double vs2, double phi0,
                                double t_end, double dt, const ModelParams& prm);

void write_phase_map_csv(const SweepResult& r, const std::string& path);
void write_lambda_line_csv(const SweepResult& r, const std::string& path);

std::vector<double> linspace(double a, double b, int n);

}  // namespace hegl
