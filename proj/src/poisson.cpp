#include "hegl/poisson.hpp"

#include <cmath>

#include "hegl/ops.hpp"

namespace hegl {

namespace {

double dot_interior(const Grid& g, const Field& a, const Field& b) {
  double s = 0.0;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) s += a(i, j) * b(i, j);
  return s;
}

void remove_mean(const Grid& g, Field& f) {
  const double m = interior_mean(g, f);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) f(i, j) -= m;
}

}  // namespace

void apply_lap_neumann(const Grid& g, Field& p, Field& out, Exec ex) {
  fill_ghosts_scalar(g, p);
  lap(g, p, out, ex);
}

void apply_div_coeff_grad_wide(const Grid& g, const Field* coeff, Field& p, Field& out, Exec ex) {
  fill_ghosts_scalar(g, p);
  Vec3Field gp(g);
  grad(g, p, gp, ex);
  fill_ghosts_vector(g, gp, VecRule::free_normal);
  if (coeff) {
    for_all(g, ex, [&](int i, int j) {
      const double c = (*coeff)(i, j);
      gp.x(i, j) *= c;
      gp.y(i, j) *= c;
      gp.z(i, j) *= c;
    });
  }
  div(g, gp, out, ex);
}

SolveReport cg_neumann(const Grid& g, const LinOp& op, const Field& rhs, Field& x,
                       double tol_inf, int max_iter) {
  SolveReport rep;
  Field b = rhs;
  rep.rhs_mean_removed = interior_mean(g, b);
  remove_mean(g, b);
  remove_mean(g, x);

  Field r(b), ap(b), p(b);
  // r = b - A x
  op(x, ap);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) r(i, j) = b(i, j) - ap(i, j);
  remove_mean(g, r);
  p = r;

  double rr = dot_interior(g, r, r);
  rep.residual_inf = interior_max_abs(g, r);
  if (rep.residual_inf <= tol_inf) {
    rep.converged = true;
    return rep;
  }

  for (int it = 0; it < max_iter; ++it) {
    op(p, ap);
    const double pap = dot_interior(g, p, ap);
    if (pap == 0.0) break;
    const double alpha = rr / pap;
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) {
        x(i, j) += alpha * p(i, j);
        r(i, j) -= alpha * ap(i, j);
      }
    remove_mean(g, r);  // keep the iteration orthogonal to the null space
    const double rr_new = dot_interior(g, r, r);
    rep.iterations = it + 1;
    rep.residual_inf = interior_max_abs(g, r);
    if (rep.residual_inf <= tol_inf) {
      rep.converged = true;
      break;
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) p(i, j) = r(i, j) + beta * p(i, j);
  }
  remove_mean(g, x);
  return rep;
}

SolveReport poisson_neumann(const Grid& g, const Field& rhs, Field& u, double tol_inf,
                            int max_iter) {
  LinOp op = [&g](Field& p, Field& out) { apply_lap_neumann(g, p, out); };
  return cg_neumann(g, op, rhs, u, tol_inf, max_iter);
}

}  // namespace hegl
