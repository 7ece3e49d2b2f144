#include "hegl/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "hegl/detail/stage.hpp"
#include "hegl/ops.hpp"
#include "hegl/thermo.hpp"

namespace hegl {

namespace detail {

void tail_rates(const TailIn& in, StageRates& out) {
  const Grid& g = *in.g;
  const ModelParams& prm = *in.prm;
  const Exec ex = in.ex;
  const Vec3Field& vn = *in.vn;
  const Field& rho = *in.rho;
  const Field& theta = *in.theta;
  const Field& n = *in.n;
  const Vec3Field& w = *in.w;
  const double kappa2 = prm.kappa * prm.kappa;
  const bool advective = (in.dots == StepConfig::Dots::advective);

  out.mass = Field(g);
  for_all(g, ex, [&](int i, int j) { out.mass(i, j) = rho(i, j) * (1.0 - n(i, j)); });
  out.min_mass = interior_min(g, out.mass);

  out.div_vn = Field(g);
  div(g, vn, out.div_vn, ex);

  // normal momentum: -curl curl v_n + nu grad div v_n is assembled through
  // the vector identity as lap(v_n) + (nu - 1) grad(div v_n)
  Vec3Field visc(g), gdiv(g), capdiv(g), crl(g), gth(g);
  lap_vec(g, vn, visc, ex);
  {
    Field dvng = out.div_vn;
    fill_ghosts_scalar(g, dvng);
    grad(g, dvng, gdiv, ex);
  }
  div_sym_tensor(g, *in.cap, capdiv, ex);
  Vec3Field cw(g);
  for_all(g, ex, [&](int i, int j) {
    const double r_ = rho(i, j);
    cw.x(i, j) = r_ * w.x(i, j);
    cw.y(i, j) = r_ * w.y(i, j);
    cw.z(i, j) = r_ * w.z(i, j);
  });
  curl(g, cw, crl, ex);
  grad(g, theta, gth, ex);

  out.dvn_dt_nop = Vec3Field(g);
  const double numm = prm.nu - 1.0;
  for_interior(g, ex, [&](int i, int j) {
    const double m = out.mass(i, j);
    const double rn = rho(i, j) * n(i, j);
    out.dvn_dt_nop.x(i, j) = (visc.x(i, j) + numm * gdiv.x(i, j) - capdiv.x(i, j) / kappa2 -
                              rn * gth.x(i, j) - crl.x(i, j) + rho(i, j) * prm.g.x) /
                             m;
    out.dvn_dt_nop.y(i, j) = (visc.y(i, j) + numm * gdiv.y(i, j) - capdiv.y(i, j) / kappa2 -
                              rn * gth.y(i, j) - crl.y(i, j) + rho(i, j) * prm.g.y) /
                             m;
    out.dvn_dt_nop.z(i, j) = (visc.z(i, j) + numm * gdiv.z(i, j) - capdiv.z(i, j) / kappa2 -
                              rn * gth.z(i, j) - crl.z(i, j) + rho(i, j) * prm.g.z) /
                             m;
  });
  if (advective) {
    Vec3Field adv(g);
    convect_vec(g, vn, vn, adv, ex);
    for_interior(g, ex, [&](int i, int j) {
      out.dvn_dt_nop.x(i, j) -= adv.x(i, j);
      out.dvn_dt_nop.y(i, j) -= adv.y(i, j);
      out.dvn_dt_nop.z(i, j) -= adv.z(i, j);
    });
  }

  // continuity
  Vec3Field vmix(g);
  for_all(g, ex, [&](int i, int j) {
    const double nn = n(i, j);
    vmix.x(i, j) = (1.0 - nn) * vn.x(i, j) + w.x(i, j);
    vmix.y(i, j) = (1.0 - nn) * vn.y(i, j) + w.y(i, j);
    vmix.z(i, j) = (1.0 - nn) * vn.z(i, j) + w.z(i, j);
  });
  Field divmix(g);
  div(g, vmix, divmix, ex);
  out.drho_dt = Field(g);
  for_interior(g, ex,
               [&](int i, int j) { out.drho_dt(i, j) = -rho(i, j) * divmix(i, j); });
  if (advective) {
    Field adv(g);
    convect(g, vn, rho, adv, ex);
    for_interior(g, ex, [&](int i, int j) { out.drho_dt(i, j) -= adv(i, j); });
  }

  // temperature
  Field k0f(g);
  for_all(g, ex, [&](int i, int j) { k0f(i, j) = prm.k0(theta(i, j)); });
  Field cond(g);
  div_coeff_grad(g, k0f, theta, cond, ex);
  Vec3Field cq(g);
  for_all(g, ex, [&](int i, int j) {
    const double c = rho(i, j);
    cq.x(i, j) = c * (w.x(i, j) - n(i, j) * vn.x(i, j));
    cq.y(i, j) = c * (w.y(i, j) - n(i, j) * vn.y(i, j));
    cq.z(i, j) = c * (w.z(i, j) - n(i, j) * vn.z(i, j));
  });
  Field divq(g);
  div(g, cq, divq, ex);

  out.dtheta_dt = Field(g);
  out.sigma = Field(g);
  const Field& phiphidot = *in.phi_phidot;
  const Field& d2 = *in.d2;
  const Vec3Field& u = *in.u;
  for_interior(g, ex, [&](int i, int j) {
    const double r_ = rho(i, j), th = theta(i, j);
    const double u2 = u.x(i, j) * u.x(i, j) + u.y(i, j) * u.y(i, j) + u.z(i, j) * u.z(i, j);
    const double dv2 = out.div_vn(i, j) * out.div_vn(i, j);
    const double heat = r_ * th * phiphidot(i, j) + prm.tau * r_ * d2(i, j) + u2 +
                        prm.nu * dv2 + cond(i, j) + divq(i, j) * th + r_ * prm.r;
    out.dtheta_dt(i, j) = heat / (r_ * prm.c0);
    const double gth2 = gth.x(i, j) * gth.x(i, j) + gth.y(i, j) * gth.y(i, j) +
                        gth.z(i, j) * gth.z(i, j);
    out.sigma(i, j) = prm.tau * r_ * d2(i, j) + u2 + prm.nu * dv2 + (k0f(i, j) / th) * gth2;
  });
  if (advective) {
    Field adv(g);
    convect(g, vn, theta, adv, ex);
    for_interior(g, ex, [&](int i, int j) { out.dtheta_dt(i, j) -= adv(i, j); });
  }

  out.target = Field(g);
  for_interior(g, ex, [&](int i, int j) {
    out.target(i, j) = prm.lambda * rho(i, j) * phiphidot(i, j);
  });
}

ProjectionOut project_velocity(const ProjectionIn& in, Vec3Field& vn, Field& p_out,
                               Field& q_warm) {
  const Grid& g = *in.g;
  ProjectionOut out;

  Field cinv(g);
  for_all(g, in.ex, [&](int i, int j) { cinv(i, j) = 1.0 / (*in.mass)(i, j); });

  fill_ghosts_vector(g, vn, VecRule::no_slip);
  Field rhs(g);
  div(g, vn, rhs, in.ex);
  out.mean_defect = std::fabs(interior_mean(g, *in.target));
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) rhs(i, j) -= (*in.target)(i, j);

  LinOp op = [&](Field& p, Field& o) { apply_div_coeff_grad_wide(g, &cinv, p, o, in.ex); };
  if (q_warm.a.empty()) q_warm = Field(g);
  out.solve = cg_neumann(g, op, rhs, q_warm, 0.5 * in.tol, in.max_iter);
  if (!out.solve.converged)
    throw StepFailure(in.stage, "p", "pressure projection did not converge", out.solve.residual_inf);

  Field q = q_warm;
  fill_ghosts_scalar(g, q);
  Vec3Field gq(g);
  grad(g, q, gq, in.ex);
  for_interior(g, in.ex, [&](int i, int j) {
    vn.x(i, j) -= cinv(i, j) * gq.x(i, j);
    vn.y(i, j) -= cinv(i, j) * gq.y(i, j);
    vn.z(i, j) -= cinv(i, j) * gq.z(i, j);
  });
  fill_ghosts_vector(g, vn, VecRule::no_slip);

  Field d(g);
  div(g, vn, d, in.ex);
  double res = 0.0;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i)
      res = std::max(res, std::fabs(d(i, j) - (*in.target)(i, j)));
  out.constraint_residual = res;

  p_out = Field(g);
  const double inv_delta = 1.0 / in.delta;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) p_out(i, j) = q(i, j) * inv_delta;
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// unit-operation surface

void tilt_m(const FieldState& s, const ModelParams& prm, Field& out) {
  out = Field(s.grid);
  for (int j = 1; j <= s.grid.ny; ++j)
    for (int i = 1; i <= s.grid.nx; ++i)
      out(i, j) = s.theta(i, j) + prm.lambda * s.p(i, j) + norm2(s.vs.at(i, j)) -
                  norm2(s.vn.at(i, j));
}

void solve_phi_s(const FieldState& s_in, const ModelParams& prm, Field& out) {
  FieldState s = s_in;
  apply_bcs(s, prm);
  const Grid& g = s.grid;
  Vec3Field c(g);
  for_all(g, default_exec(), [&](int i, int j) {
    const double f = s.rho(i, j) * s.phi(i, j) * s.phi(i, j);
    c.x(i, j) = f * s.vs.x(i, j);
    c.y(i, j) = f * s.vs.y(i, j);
    c.z(i, j) = f * s.vs.z(i, j);
  });
  Field d(g);
  div(g, c, d, default_exec());
  out = Field(g);
  const double tk2 = prm.tau * prm.kappa * prm.kappa;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      const double rp2 = s.rho(i, j) * s.phi(i, j) * s.phi(i, j);
      out(i, j) = -d(i, j) / (tk2 * (rp2 + prm.eps_reg));
    }
}

void phase_rhs(const FieldState& s_in, const Field& m, const ModelParams& prm, Field& out) {
  FieldState s = s_in;
  apply_bcs(s, prm);
  const Grid& g = s.grid;
  Field dcg(g);
  div_coeff_grad(g, s.rho, s.phi, dcg, default_exec());
  out = Field(g);
  const double kappa2 = prm.kappa * prm.kappa;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      const double r = s.rho(i, j), ph = s.phi(i, j);
      out(i, j) = (dcg(i, j) / kappa2 - r * prm.theta_lambda * ph * (ph * ph - 1.0) -
                   r * m(i, j) * ph) /
                  (prm.tau * r);
    }
}

void vs_rhs(const FieldState& s_in, const ModelParams& prm, Vec3Field& out) {
  FieldState s = s_in;
  apply_bcs(s, prm);
  const Grid& g = s.grid;
  Vec3Field gps(g), gth(g), crl(g);
  grad(g, s.phi_s, gps, default_exec());
  grad(g, s.theta, gth, default_exec());
  curl(g, s.vn, crl, default_exec());
  out = Vec3Field(g);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      const double rp2 = s.rho(i, j) * s.phi(i, j) * s.phi(i, j);
      out.x(i, j) = -gps.x(i, j) - crl.x(i, j) - rp2 * s.vs.x(i, j) + gth.x(i, j);
      out.y(i, j) = -gps.y(i, j) - crl.y(i, j) - rp2 * s.vs.y(i, j) + gth.y(i, j);
      out.z(i, j) = -gps.z(i, j) - crl.z(i, j) - rp2 * s.vs.z(i, j) + gth.z(i, j);
    }
}

Field continuity_step(const FieldState& s_in, double dt, StepConfig::Dots dots, Exec ex) {
  FieldState s = s_in;
  ModelParams dflt;
  apply_bcs(s, dflt);
  const Grid& g = s.grid;
  Vec3Field vmix(g);
  for_all(g, ex, [&](int i, int j) {
    const double n = s.phi(i, j) * s.phi(i, j);
    vmix.x(i, j) = (1.0 - n) * s.vn.x(i, j) + n * s.vs.x(i, j);
    vmix.y(i, j) = (1.0 - n) * s.vn.y(i, j) + n * s.vs.y(i, j);
    vmix.z(i, j) = (1.0 - n) * s.vn.z(i, j) + n * s.vs.z(i, j);
  });
  Field dv(g);
  div(g, vmix, dv, ex);
  Field adv(g);
  if (dots == StepConfig::Dots::advective) convect(g, s.vn, s.rho, adv, ex);
  Field rho = s.rho;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      rho(i, j) += dt * (-s.rho(i, j) * dv(i, j) - adv(i, j));
      if (!(rho(i, j) > 0.0))
        throw StepFailure(0, "rho", "density lost positivity in continuity step", rho(i, j));
    }
  return rho;
}

void temperature_rhs(const FieldState& s_in, const Field& phi_dot, const Vec3Field& vs_dot,
                     const ModelParams& prm, Field& out) {
  FieldState s = s_in;
  apply_bcs(s, prm);
  const Grid& g = s.grid;
  Field n(g);
  Vec3Field w(g);
  for_all(g, default_exec(), [&](int i, int j) {
    const double p2 = s.phi(i, j) * s.phi(i, j);
    n(i, j) = p2;
    w.x(i, j) = p2 * s.vs.x(i, j);
    w.y(i, j) = p2 * s.vs.y(i, j);
    w.z(i, j) = p2 * s.vs.z(i, j);
  });
  Vec3Field gps(g), gth(g);
  grad(g, s.phi_s, gps, default_exec());
  grad(g, s.theta, gth, default_exec());
  Field k0f(g);
  for_all(g, default_exec(), [&](int i, int j) { k0f(i, j) = prm.k0(s.theta(i, j)); });
  Field cond(g);
  div_coeff_grad(g, k0f, s.theta, cond, default_exec());
  Vec3Field cq(g);
  for_all(g, default_exec(), [&](int i, int j) {
    const double c = s.rho(i, j);
    cq.x(i, j) = c * (w.x(i, j) - n(i, j) * s.vn.x(i, j));
    cq.y(i, j) = c * (w.y(i, j) - n(i, j) * s.vn.y(i, j));
    cq.z(i, j) = c * (w.z(i, j) - n(i, j) * s.vn.z(i, j));
  });
  Field divq(g), dvn(g);
  div(g, cq, divq, default_exec());
  div(g, s.vn, dvn, default_exec());

  out = Field(g);
  const double kappa2 = prm.kappa * prm.kappa;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      const double r = s.rho(i, j), th = s.theta(i, j), pd = phi_dot(i, j);
      const double ux = vs_dot.x(i, j) + gps.x(i, j) - gth.x(i, j);
      const double uy = vs_dot.y(i, j) + gps.y(i, j) - gth.y(i, j);
      const double uz = vs_dot.z(i, j) + gps.z(i, j) - gth.z(i, j);
      const double ps = s.phi_s(i, j);
      const double heat = r * th * s.phi(i, j) * pd + prm.tau * r * pd * pd +
                          ux * ux + uy * uy + uz * uz + prm.nu * dvn(i, j) * dvn(i, j) +
                          prm.tau * kappa2 * r * n(i, j) * ps * ps + cond(i, j) +
                          divq(i, j) * th + r * prm.r;
      out(i, j) = heat / (r * prm.c0);
    }
}

void vn_rhs(const FieldState& s_in, const StepConfig& cfg, const ModelParams& prm,
            Vec3Field& out) {
  FieldState s = s_in;
  apply_bcs(s, prm);
  const Grid& g = s.grid;
  const Exec ex = cfg.exec;
  Field n(g);
  Vec3Field w(g), b(g);
  for_all(g, ex, [&](int i, int j) {
    const double p2 = s.phi(i, j) * s.phi(i, j);
    n(i, j) = p2;
    w.x(i, j) = p2 * s.vs.x(i, j);
    w.y(i, j) = p2 * s.vs.y(i, j);
    w.z(i, j) = p2 * s.vs.z(i, j);
  });
  grad(g, s.phi, b, ex);
  fill_ghosts_vector(g, b, VecRule::free_normal);
  SymTensorField cap(g);
  outer_product(g, b, cap, ex);
  Field phiphidot(g), d2(g);
  Vec3Field u(g);
  detail::TailIn tin;
  tin.g = &g;
  tin.prm = &prm;
  tin.dots = cfg.material_derivative;
  tin.ex = ex;
  tin.vn = &s.vn;
  tin.rho = &s.rho;
  tin.theta = &s.theta;
  tin.n = &n;
  tin.w = &w;
  tin.cap = &cap;
  tin.phi_phidot = &phiphidot;
  tin.d2 = &d2;
  tin.u = &u;
  StageRates r;
  detail::tail_rates(tin, r);
  out = std::move(r.dvn_dt_nop);
}

VnStepResult vn_step(FieldState& s, const Field& phi_dot, double dt, const StepConfig& cfg,
                     const ModelParams& prm) {
  apply_bcs(s, prm);
  const Grid& g = s.grid;
  const Exec ex = cfg.exec;

  Field n(g);
  Vec3Field w(g), b(g);
  for_all(g, ex, [&](int i, int j) {
    const double p2 = s.phi(i, j) * s.phi(i, j);
    n(i, j) = p2;
    w.x(i, j) = p2 * s.vs.x(i, j);
    w.y(i, j) = p2 * s.vs.y(i, j);
    w.z(i, j) = p2 * s.vs.z(i, j);
  });
  grad(g, s.phi, b, ex);
  fill_ghosts_vector(g, b, VecRule::free_normal);
  SymTensorField cap(g);
  outer_product(g, b, cap, ex);

  Field phiphidot(g), d2(g);
  Vec3Field u(g);  // unused by the vn sector of the tail
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) phiphidot(i, j) = s.phi(i, j) * phi_dot(i, j);

  detail::TailIn tin;
  tin.g = &g;
  tin.prm = &prm;
  tin.dots = cfg.material_derivative;
  tin.ex = ex;
  tin.vn = &s.vn;
  tin.rho = &s.rho;
  tin.theta = &s.theta;
  tin.n = &n;
  tin.w = &w;
  tin.cap = &cap;
  tin.phi_phidot = &phiphidot;
  tin.d2 = &d2;
  tin.u = &u;
  StageRates r;
  detail::tail_rates(tin, r);
  if (r.min_mass < cfg.eps_mass)
    throw StepFailure(0, "vn", "degenerate normal mass rho(1-phi^2)", r.min_mass);

  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      s.vn.x(i, j) += dt * r.dvn_dt_nop.x(i, j);
      s.vn.y(i, j) += dt * r.dvn_dt_nop.y(i, j);
      s.vn.z(i, j) += dt * r.dvn_dt_nop.z(i, j);
    }

  detail::ProjectionIn pin;
  pin.g = &g;
  pin.mass = &r.mass;
  pin.target = &r.target;
  pin.delta = dt;
  pin.tol = cfg.projection_tol;
  pin.max_iter = cfg.max_cg_iter;
  pin.ex = ex;
  Field q;
  detail::ProjectionOut pout = detail::project_velocity(pin, s.vn, s.p, q);
  apply_bcs(s, prm);

  VnStepResult res;
  res.solve = pout.solve;
  res.constraint_residual = pout.constraint_residual;
  res.mean_defect = pout.mean_defect;
  return res;
}

// ---------------------------------------------------------------------------
// midpoint stepper

Stepper::Stepper(const Grid& g, StepConfig cfg, ModelParams prm)
    : cfg_(cfg), prm_(prm), grid_(g) {}

void Stepper::evaluate(FieldState& s, StageRates& r) {
  const Grid& g = grid_;
  const Exec ex = cfg_.exec;
  apply_bcs(s, prm_);

  // algebraic phi_s refresh
  {
    Vec3Field c(g);
    for_all(g, ex, [&](int i, int j) {
      const double f = s.rho(i, j) * s.phi(i, j) * s.phi(i, j);
      c.x(i, j) = f * s.vs.x(i, j);
      c.y(i, j) = f * s.vs.y(i, j);
      c.z(i, j) = f * s.vs.z(i, j);
    });
    Field d(g);
    div(g, c, d, ex);
    const double tk2 = prm_.tau * prm_.kappa * prm_.kappa;
    for_interior(g, ex, [&](int i, int j) {
      const double rp2 = s.rho(i, j) * s.phi(i, j) * s.phi(i, j);
      s.phi_s(i, j) = -d(i, j) / (tk2 * (rp2 + prm_.eps_reg));
    });
    fill_ghosts_scalar(g, s.phi_s);
  }

  // surrogate bundle
  Field n(g);
  Vec3Field w(g), b(g);
  for_all(g, ex, [&](int i, int j) {
    const double p2 = s.phi(i, j) * s.phi(i, j);
    n(i, j) = p2;
    w.x(i, j) = p2 * s.vs.x(i, j);
    w.y(i, j) = p2 * s.vs.y(i, j);
    w.z(i, j) = p2 * s.vs.z(i, j);
  });
  grad(g, s.phi, b, ex);
  fill_ghosts_vector(g, b, VecRule::free_normal);
  SymTensorField cap(g);
  outer_product(g, b, cap, ex);

  // phase sector
  Field dcg(g);
  div_coeff_grad(g, s.rho, s.phi, dcg, ex);
  r.phi_dot = Field(g);
  const double kappa2 = prm_.kappa * prm_.kappa;
  for_interior(g, ex, [&](int i, int j) {
    const double rr = s.rho(i, j), ph = s.phi(i, j);
    const double coef = -rr * (prm_.theta_lambda * (n(i, j) - 1.0) + s.theta(i, j) +
                               prm_.lambda * s.p(i, j) - norm2(s.vn.at(i, j))) -
                        rr * norm2(s.vs.at(i, j));
    r.phi_dot(i, j) = (dcg(i, j) / kappa2 + coef * ph) / (prm_.tau * rr);
  });
  r.dphi_dt = r.phi_dot;
  if (cfg_.material_derivative == StepConfig::Dots::advective) {
    Field adv(g);
    convect(g, s.vn, s.phi, adv, ex);
    for_interior(g, ex, [&](int i, int j) { r.dphi_dt(i, j) -= adv(i, j); });
  }

  // superfluid velocity sector
  Vec3Field gps(g), gth(g), crl(g);
  grad(g, s.phi_s, gps, ex);
  grad(g, s.theta, gth, ex);
  curl(g, s.vn, crl, ex);
  r.vs_dot = Vec3Field(g);
  Vec3Field u(g);
  for_interior(g, ex, [&](int i, int j) {
    const double rr = s.rho(i, j);
    const double vx = -gps.x(i, j) - crl.x(i, j) - rr * w.x(i, j) + gth.x(i, j);
    const double vy = -gps.y(i, j) - crl.y(i, j) - rr * w.y(i, j) + gth.y(i, j);
    const double vz = -gps.z(i, j) - crl.z(i, j) - rr * w.z(i, j) + gth.z(i, j);
    r.vs_dot.x(i, j) = vx;
    r.vs_dot.y(i, j) = vy;
    r.vs_dot.z(i, j) = vz;
    u.x(i, j) = vx + gps.x(i, j) - gth.x(i, j);
    u.y(i, j) = vy + gps.y(i, j) - gth.y(i, j);
    u.z(i, j) = vz + gps.z(i, j) - gth.z(i, j);
  });
  r.dvs_dt = r.vs_dot;
  if (cfg_.material_derivative == StepConfig::Dots::advective) {
    Vec3Field adv(g);
    convect_vec(g, s.vn, s.vs, adv, ex);
    for_interior(g, ex, [&](int i, int j) {
      r.dvs_dt.x(i, j) -= adv.x(i, j);
      r.dvs_dt.y(i, j) -= adv.y(i, j);
      r.dvs_dt.z(i, j) -= adv.z(i, j);
    });
  }

  Field phiphidot(g), d2(g);
  for_interior(g, ex, [&](int i, int j) {
    phiphidot(i, j) = s.phi(i, j) * r.phi_dot(i, j);
    const double ps = s.phi_s(i, j);
    d2(i, j) = r.phi_dot(i, j) * r.phi_dot(i, j) + kappa2 * n(i, j) * ps * ps;
  });

  detail::TailIn tin;
  tin.g = &g;
  tin.prm = &prm_;
  tin.dots = cfg_.material_derivative;
  tin.ex = ex;
  tin.vn = &s.vn;
  tin.rho = &s.rho;
  tin.theta = &s.theta;
  tin.n = &n;
  tin.w = &w;
  tin.cap = &cap;
  tin.phi_phidot = &phiphidot;
  tin.d2 = &d2;
  tin.u = &u;
  detail::tail_rates(tin, r);
}

FieldState Stepper::advance(const FieldState& s0, StageRates& r, double delta, int stage,
                            VnStepResult* proj_out) {
  FieldState s = s0;
  s.t = s0.t + delta;
  const Grid& g = grid_;

  if (!cfg_.pin_phi)
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) s.phi(i, j) += delta * r.dphi_dt(i, j);
  if (!cfg_.pin_vs)
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) {
        s.vs.x(i, j) += delta * r.dvs_dt.x(i, j);
        s.vs.y(i, j) += delta * r.dvs_dt.y(i, j);
        s.vs.z(i, j) += delta * r.dvs_dt.z(i, j);
      }
  if (!cfg_.pin_rho)
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) {
        s.rho(i, j) += delta * r.drho_dt(i, j);
        if (!(s.rho(i, j) > 0.0))
          throw StepFailure(stage, "rho", "density lost positivity", s.rho(i, j));
      }
  if (!cfg_.pin_theta)
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) {
        s.theta(i, j) += delta * r.dtheta_dt(i, j);
        if (!(s.theta(i, j) > 0.0))
          throw StepFailure(stage, "theta", "temperature lost positivity", s.theta(i, j));
      }
  if (!cfg_.pin_vn) {
    if (r.min_mass < cfg_.eps_mass)
      throw StepFailure(stage, "vn", "degenerate normal mass rho(1-phi^2)", r.min_mass);
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) {
        s.vn.x(i, j) += delta * r.dvn_dt_nop.x(i, j);
        s.vn.y(i, j) += delta * r.dvn_dt_nop.y(i, j);
        s.vn.z(i, j) += delta * r.dvn_dt_nop.z(i, j);
      }
    detail::ProjectionIn pin;
    pin.g = &g;
    pin.mass = &r.mass;
    pin.target = &r.target;
    pin.delta = delta;
    pin.tol = cfg_.projection_tol;
    pin.max_iter = cfg_.max_cg_iter;
    pin.ex = cfg_.exec;
    pin.stage = stage;
    detail::ProjectionOut pout = detail::project_velocity(pin, s.vn, s.p, q_warm_);
    if (proj_out) {
      proj_out->solve = pout.solve;
      proj_out->constraint_residual = pout.constraint_residual;
      proj_out->mean_defect = pout.mean_defect;
    }
  }
  apply_bcs(s, prm_);

  // NaN guard: a blown-up field shows as a positivity or NaN failure here
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i)
      if (!std::isfinite(s.phi(i, j)) || !std::isfinite(s.theta(i, j)) ||
          !std::isfinite(s.vn.x(i, j)))
        throw StepFailure(stage, "state", "non-finite value", 0.0);
  return s;
}

StepResult Stepper::step(const FieldState& s0_in) {
  FieldState s0 = s0_in;
  evaluate(s0, r1_);
  FieldState sh = advance(s0, r1_, 0.5 * cfg_.dt, 1, nullptr);
  evaluate(sh, r2_);
  VnStepResult proj;
  FieldState s1 = advance(s0, r2_, cfg_.dt, 2, &proj);

  // refresh the algebraic phi_s of the published state
  solve_phi_s(s1, prm_, s1.phi_s);
  fill_ghosts_scalar(grid_, s1.phi_s);
  apply_bcs(s1, prm_);

  StepResult out{std::move(s1), {}};
  DiagnosticsReport& rep = out.report;
  rep.t = out.state.t;
  rep.dt = cfg_.dt;
  rep.E_total = total_energy(out.state, prm_);
  rep.mass_total = total_mass(out.state);
  rep.constraint_residual = proj.constraint_residual;
  rep.constraint_mean_defect = proj.mean_defect;
  rep.projection_iters = proj.solve.iterations;
  rep.entropy_production_min = interior_min(grid_, r2_.sigma);
  PowerAudit pa = power_audit(out.state, s0_in, cfg_.dt, prm_,
                              cfg_.material_derivative == StepConfig::Dots::advective
                                  ? DotMode::advective
                                  : DotMode::partial);
  rep.P_i_phi = pa.P_i_phi;
  rep.P_e_phi = pa.P_e_phi;
  rep.P_i_vs = pa.P_i_vs;
  rep.P_e_vs = pa.P_e_vs;
  rep.first_law_residual = pa.first_law_residual;
  auto fluxes = boundary_flux_audit(out.state, prm_);
  rep.flux_q = fluxes[0];
  rep.flux_phase = fluxes[1];
  rep.flux_pvn = fluxes[2];
  rep.flux_vs = fluxes[3];
  rep.flux_curl_vs = fluxes[4];
  double mp = 0.0;
  for (int j = 1; j <= grid_.ny; ++j)
    for (int i = 1; i <= grid_.nx; ++i)
      mp = std::max(mp, out.state.phi(i, j) * out.state.phi(i, j));
  rep.max_phi_sq = mp;
  rep.cfl_advective = advective_cfl(out.state, cfg_.dt);
  return out;
}

StepResult step(const FieldState& s0, const StepConfig& cfg, const ModelParams& prm) {
  Stepper st(s0.grid, cfg, prm);
  return st.step(s0);
}

double advective_cfl(const FieldState& s, double dt) {
  double c = 0.0;
  for (int j = 1; j <= s.grid.ny; ++j)
    for (int i = 1; i <= s.grid.nx; ++i)
      c = std::max(c, std::fabs(s.vn.x(i, j)) / s.grid.hx +
                          std::fabs(s.vn.y(i, j)) / s.grid.hy);
  return c * dt;
}

double stable_dt(const Grid& g, const ModelParams& prm, double theta_max, double safety) {
  const double inv_h2 = 1.0 / (g.hx * g.hx) + (g.dim == 2 ? 1.0 / (g.hy * g.hy) : 0.0);
  const double d_phase = 1.0 / (prm.tau * prm.kappa * prm.kappa);
  const double d_theta = std::max(prm.k0(theta_max), prm.k0_const) / prm.c0;
  const double d_vn = (std::max(prm.nu, 1.0) + 1.0) / 0.2;  // pessimistic normal mass
  const double d = std::max({d_phase, d_theta, d_vn});
  const double dt_diff = 0.5 / (d * inv_h2);
  const double dt_react = prm.tau / (3.0 * prm.theta_lambda + 1.0);
  return safety * std::min(dt_diff, dt_react);
}

}  // namespace hegl
