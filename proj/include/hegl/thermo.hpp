#pragma once

#include <optional>

#include "hegl/params.hpp"

namespace hegl {

// Pointwise constitutive functions of the double-well model
//   F(phi) = phi^4/4 - phi^2/2,  G(phi) = phi^2/2,
//   W(phi) = theta_lambda * F(phi) + m * G(phi).
// The thermal closure is Psi0(theta) = -c0 theta ln(theta), giving a constant
// specific heat e0(theta) = c0 theta through e0 = Psi0 - theta Psi0'.

struct PotentialEval {
  double F = 0, dF = 0;
  double G = 0, dG = 0;
  double W = 0, dW = 0;
};

PotentialEval potential_w(double phi, double m, const ModelParams& p);

// Nonnegative global minimizer of W: 0 for m >= theta_lambda, else
// sqrt(1 - m/theta_lambda). For m in [0, theta_lambda] the value lies in [0, 1].
double stationary_phase(double m, const ModelParams& p);

// Psi = theta_lambda F(phi) + theta phi^2/2 + |grad phi|^2/(2 kappa^2) + Psi0(theta)
double free_energy_density(double phi, Vec3 grad_phi, double theta, const ModelParams& p);

// eta = -d(Psi)/d(theta) = -phi^2/2 + c0 (ln theta + 1)
double entropy_density(double phi, double theta, const ModelParams& p);

// e = |grad phi|^2/(2 kappa^2) + theta_lambda F(phi) + c0 theta
double internal_energy_density(double phi, Vec3 grad_phi, double theta, const ModelParams& p);

// E = e + phi^2 |v_s|^2 / 2 + (1 - phi^2) |v_n|^2 / 2
double total_energy_density(double phi, Vec3 grad_phi, double theta, Vec3 v_s, Vec3 v_n,
                            const ModelParams& p);

// q = -k0(theta) grad theta - rho phi^2 theta (v_s - v_n)
Vec3 heat_flux(double phi, double theta, Vec3 grad_theta, Vec3 v_s, Vec3 v_n, double rho,
               const ModelParams& p);

// L = theta_lambda * [eta(theta_lambda, phi0) - eta(theta_lambda, 0)] with
// phi0 the coexisting minimizer at the transition; zero for this model.
// The override exists for tests that check the formula is actually wired.
double latent_heat(const ModelParams& p, std::optional<double> phi0_override = std::nullopt);

}  // namespace hegl
