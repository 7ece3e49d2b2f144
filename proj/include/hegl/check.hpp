#pragma once

#include <string>
#include <vector>

#include "hegl/dynamics.hpp"

namespace hegl {

// Seeded smooth random state: low-mode cosines for the scalars (zero normal
// slope at the walls) and sine products for the velocities (vanishing normal
// components / no slip), so the ghost rules are consistent with the data.
FieldState random_smooth_state(const Grid& g, unsigned long seed, const ModelParams& prm,
                               double amp);

struct CheckResult {
  std::vector<std::string> violations;
  std::vector<std::string> passed;
  bool ok() const { return violations.empty(); }
};

// Full invariant suite: discrete operator identities and convergence orders,
// summation by parts, thermodynamic closure identities, minimizer oracle,
// latent heat, Clausius-Duhem positivity on randomized runs, boundary-flux
// audit with a deliberate-violation control, projection residuals.
CheckResult run_check(const ModelParams& prm, unsigned long seed, bool quick);

}  // namespace hegl
