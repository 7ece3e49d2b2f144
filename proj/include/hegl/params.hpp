#pragma once

#include <string>
#include <vector>

#include "hegl/grid.hpp"

namespace hegl {

// Scalar constitutive constants and source data. All quantities are
// dimensionless; theta_lambda defaults to 2.17 in model units and the other
// coefficients are order one.
struct ModelParams {
  double tau = 1.0;           // phase relaxation coefficient, > 0
  double kappa = 1.0;         // gradient penalty coefficient, > 0
  double nu = 1.0;            // bulk viscosity, >= 0
  double lambda = 0.1;        // pressure coupling in the tilt / compressibility
  double theta_lambda = 2.17; // transition temperature
  double c0 = 1.0;            // specific heat: e0(theta) = c0 * theta
  double k0_const = 1.0;      // thermal conductivity law k0(theta) = k0_const + k0_slope * theta
  double k0_slope = 0.0;
  double eps_reg = 1e-10;     // regularization of the phi_s solve
  Vec3 g{};                   // body force per unit mass
  double r = 0.0;             // heat supply
  Vec3 omega_bc{};            // datum for (curl v_s) x n on the boundary

  double k0(double theta) const { return k0_const + k0_slope * theta; }
};

// Checks the sign constraints the model needs for thermodynamic
// admissibility over the given operating temperature range. Returns an empty
// list iff every constraint holds (report style, never throws).
std::vector<std::string> validate_params(const ModelParams& p, double theta_min,
                                         double theta_max);

}  // namespace hegl
