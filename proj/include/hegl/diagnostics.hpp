#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "hegl/state.hpp"

namespace hegl {

// Per-step global budgets, balance residuals and boundary audits.
struct DiagnosticsReport {
  double t = 0.0;
  double dt = 0.0;
  double E_total = 0.0;     // integral of rho E
  double mass_total = 0.0;  // integral of rho
  double P_i_phi = 0.0, P_e_phi = 0.0;
  double P_i_vs = 0.0, P_e_vs = 0.0;
  double first_law_residual = 0.0;
  double entropy_production_min = 0.0;
  double constraint_residual = 0.0;      // max |div v_n - lambda rho phi phi_dot|
  double constraint_mean_defect = 0.0;   // |mean of the constraint target|
  // boundary flux integrals: q.n, (rho phi_dot grad phi / kappa^2).n,
  // (p v_n).n, the P^e_vs flux bracket, and the tangential curl trace of v_s
  double flux_q = 0.0, flux_phase = 0.0, flux_pvn = 0.0, flux_vs = 0.0, flux_curl_vs = 0.0;
  double max_phi_sq = 0.0;
  double cfl_advective = 0.0;
  int projection_iters = 0;

  std::array<double, 5> boundary_flux() const {
    return {flux_q, flux_phase, flux_pvn, flux_vs, flux_curl_vs};
  }
};

enum class DotMode { advective, partial };

// Internal/external power integrals and the first-law residual, rebuilt from
// two consecutive snapshots with discrete (backward) time derivatives so the
// residuals measure discretization error only.
struct PowerAudit {
  double P_i_phi = 0.0, P_e_phi = 0.0;
  double P_i_vs = 0.0, P_e_vs = 0.0;
  double first_law_residual = 0.0;
};

PowerAudit power_audit(const FieldState& s_new, const FieldState& s_prev, double dt,
                       const ModelParams& prm, DotMode mode);

// sigma = tau rho phi_dot^2 + |vs_dot + grad phi_s - grad theta|^2
//       + nu (div v_n)^2 + tau kappa^2 rho phi^2 phi_s^2
//       + (k0(theta)/theta) |grad theta|^2
// phi_dot/vs_dot are the stepper's own rate evaluations.
void entropy_production(const FieldState& s, const Field& phi_dot, const Vec3Field& vs_dot,
                        const ModelParams& prm, Field& sigma_out);

// Discrete surface integrals of the model's boundary fluxes, computed from
// face reconstructions of whatever ghost values the state carries (so a
// violated boundary condition is detected, not masked). Entries are the
// five values of DiagnosticsReport::boundary_flux in the same order.
std::array<double, 5> boundary_flux_audit(const FieldState& s, const ModelParams& prm);

// integral of rho * E and integral of rho
double total_energy(const FieldState& s, const ModelParams& prm);
double total_mass(const FieldState& s);
double total_entropy(const FieldState& s, const ModelParams& prm);

// CSV writer for the time series (fixed column set, full precision).
void write_series_header(std::ostream& os);
void write_series_row(std::ostream& os, const DiagnosticsReport& r);

}  // namespace hegl
