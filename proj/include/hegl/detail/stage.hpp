#pragma once

#include "hegl/dynamics.hpp"

// Stage-evaluation internals shared by the real stepper and the
// gauge-transformed stepper. The two formulations differ only in how the
// phase sector is represented; everything downstream of the surrogate bundle
// (normal momentum, continuity, temperature, entropy production, projection)
// is the same code, which is also what makes the chi = 0 reduction of the
// complex stepper agree with the real one to roundoff.

namespace hegl::detail {

struct TailIn {
  const Grid* g = nullptr;
  const ModelParams* prm = nullptr;
  StepConfig::Dots dots = StepConfig::Dots::advective;
  Exec ex = Exec::serial;
  // ghost-filled state pieces
  const Vec3Field* vn = nullptr;
  const Field* rho = nullptr;
  const Field* theta = nullptr;
  // surrogate bundle (assembled at every cell unless noted)
  const Field* n = nullptr;            // phi^2 or |psi|^2
  const Vec3Field* w = nullptr;        // phi^2 v_s or its gauge image
  const SymTensorField* cap = nullptr; // grad phi (x) grad phi or its gauge image
  const Field* phi_phidot = nullptr;   // interior only
  const Field* d2 = nullptr;           // phi_dot^2 + kappa^2 n phi_s^2, interior only
  const Vec3Field* u = nullptr;        // vs_dot + grad phi_s - grad theta, interior only
};

// Fills dvn_dt_nop, drho_dt, dtheta_dt, target, sigma, div_vn, mass,
// min_mass of `out` (constructing the fields on the given grid).
void tail_rates(const TailIn& in, StageRates& out);

struct ProjectionIn {
  const Grid* g = nullptr;
  const Field* mass = nullptr;   // rho (1 - n), all cells
  const Field* target = nullptr; // lambda rho phi phi_dot, interior
  double delta = 0.0;
  double tol = 1e-8;
  int max_iter = 100000;
  Exec ex = Exec::serial;
  int stage = 0;
};

struct ProjectionOut {
  SolveReport solve;
  double constraint_residual = 0.0;
  double mean_defect = 0.0;
};

// Corrects vn (no-slip ghosts re-imposed) so that div vn matches the
// mean-corrected target to solver tolerance; p_out = q / delta, mean free.
// q_warm carries the previous solution as the warm start.
ProjectionOut project_velocity(const ProjectionIn& in, Vec3Field& vn, Field& p_out,
                               Field& q_warm);

}  // namespace hegl::detail
