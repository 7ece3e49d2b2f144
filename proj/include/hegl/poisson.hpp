#pragma once

#include <functional>

#include "hegl/grid.hpp"

namespace hegl {

struct SolveReport {
  int iterations = 0;
  double residual_inf = 0.0;
  bool converged = false;
  double rhs_mean_removed = 0.0;  // compatibility correction applied to the rhs
};

// Matrix-free symmetric operator on interior cells. Implementations fill the
// ghosts they need from the interior values of `p`.
using LinOp = std::function<void(Field& p, Field& out)>;

// Conjugate gradients for a singular-consistent Neumann problem: the operator
// must be symmetric negative (or positive) semidefinite with constants as the
// null space. The rhs is mean-corrected, the iterate is kept mean-free, and
// the stopping test is on the max norm of the residual.
SolveReport cg_neumann(const Grid& g, const LinOp& op, const Field& rhs, Field& x, double tol_inf,
                       int max_iter);

// Compact 5-point Laplacian with even-reflection ghosts (the operator used by
// poisson_neumann and by manufactured-solution tests).
void apply_lap_neumann(const Grid& g, Field& p, Field& out, Exec ex = default_exec());

// Wide operator div(coeff * grad p) built from the same centered grad/div
// stencils the velocity correction uses, so a projection with this operator
// satisfies its divergence target to solver tolerance. `coeff` needs valid
// (even) ghosts; pass nullptr for unit coefficient.
void apply_div_coeff_grad_wide(const Grid& g, const Field* coeff, Field& p, Field& out,
                               Exec ex = default_exec());

// Solve lap(u) = rhs - mean(rhs), mean(u) = 0.
SolveReport poisson_neumann(const Grid& g, const Field& rhs, Field& u, double tol_inf,
                            int max_iter);

}  // namespace hegl
