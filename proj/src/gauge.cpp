#include "hegl/gauge.hpp"

#include <algorithm>
#include <cmath>

#include "hegl/detail/stage.hpp"
#include "hegl/ops.hpp"

namespace hegl {

GaugeField GaugeField::zero() {
  GaugeField g;
  g.chi = [](double, double, double) { return 0.0; };
  g.grad_chi = [](double, double, double) { return Vec3{}; };
  g.chi_dot = [](double, double, double) { return 0.0; };
  return g;
}

GaugeField GaugeField::constant(double c) {
  GaugeField g;
  g.chi = [c](double, double, double) { return c; };
  g.grad_chi = [](double, double, double) { return Vec3{}; };
  g.chi_dot = [](double, double, double) { return 0.0; };
  return g;
}

GaugeField GaugeField::cosine_x(double amp, int mode, double lx) {
  const double k = 2.0 * 3.14159265358979323846 * mode / lx;
  GaugeField g;
  g.chi = [amp, k](double x, double, double) { return amp * std::cos(k * x); };
  g.grad_chi = [amp, k](double x, double, double) {
    return Vec3{-amp * k * std::sin(k * x), 0.0, 0.0};
  };
  g.chi_dot = [](double, double, double) { return 0.0; };
  return g;
}

ComplexState gauge_forward(const FieldState& real, const GaugeField& chi,
                           const ModelParams& prm) {
  const Grid& g = real.grid;
  ComplexState c(g);
  c.t = real.t;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      const double x = g.x(i), y = g.y(j);
      const double ch = chi.chi(x, y, real.t);
      const Vec3 gc = chi.grad_chi(x, y, real.t);
      const double cd = chi.chi_dot(x, y, real.t);
      c.psi_re(i, j) = real.phi(i, j) * std::cos(ch);
      c.psi_im(i, j) = real.phi(i, j) * std::sin(ch);
      c.A.x(i, j) = real.vs.x(i, j) + gc.x / prm.kappa;
      c.A.y(i, j) = real.vs.y(i, j) + gc.y / prm.kappa;
      c.A.z(i, j) = real.vs.z(i, j) + gc.z / prm.kappa;
      c.phi_pot(i, j) = real.phi_s(i, j) - cd / prm.kappa;
      c.vn.x(i, j) = real.vn.x(i, j);
      c.vn.y(i, j) = real.vn.y(i, j);
      c.vn.z(i, j) = real.vn.z(i, j);
      c.p(i, j) = real.p(i, j);
      c.rho(i, j) = real.rho(i, j);
      c.theta(i, j) = real.theta(i, j);
    }
  apply_bcs(c, prm);
  return c;
}

FieldState gauge_backward(const ComplexState& cplx, const GaugeField& chi,
                          const ModelParams& prm) {
  const Grid& g = cplx.grid;
  FieldState s(g);
  s.t = cplx.t;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      const double x = g.x(i), y = g.y(j);
      const double ch = chi.chi(x, y, cplx.t);
      const Vec3 gc = chi.grad_chi(x, y, cplx.t);
      const double cd = chi.chi_dot(x, y, cplx.t);
      // phi = Re(psi e^{-i chi}); the imaginary part vanishes identically
      // for states produced by gauge_forward
      s.phi(i, j) = cplx.psi_re(i, j) * std::cos(ch) + cplx.psi_im(i, j) * std::sin(ch);
      s.vs.x(i, j) = cplx.A.x(i, j) - gc.x / prm.kappa;
      s.vs.y(i, j) = cplx.A.y(i, j) - gc.y / prm.kappa;
      s.vs.z(i, j) = cplx.A.z(i, j) - gc.z / prm.kappa;
      s.phi_s(i, j) = cplx.phi_pot(i, j) + cd / prm.kappa;
      s.vn.x(i, j) = cplx.vn.x(i, j);
      s.vn.y(i, j) = cplx.vn.y(i, j);
      s.vn.z(i, j) = cplx.vn.z(i, j);
      s.p(i, j) = cplx.p(i, j);
      s.rho(i, j) = cplx.rho(i, j);
      s.theta(i, j) = cplx.theta(i, j);
    }
  apply_bcs(s, prm);
  return s;
}

// ---------------------------------------------------------------------------

struct ComplexStepper::Rates {
  Field re_dot, im_dot, dre_dt, dim_dt;
  Vec3Field A_dot, dA_dt;
  Field phi_pot;
  StageRates tail;
  int excluded = 0;
};

ComplexStepper::ComplexStepper(const Grid& g, StepConfig cfg, ModelParams prm)
    : cfg_(cfg), prm_(prm), grid_(g) {}

namespace {

// Shared assembly of the gauge-invariant surrogate bundle from a complex
// state: n = |psi|^2, the current w, the capillary tensor, and the algebraic
// phi_pot. Everything reduces bit-exactly to the real-formulation surrogates
// when psi is real and A = v_s.
struct ComplexSurrogates {
  Field n;
  Vec3Field w;
  SymTensorField cap;
  Field phi_pot;
  Field dre_cur, dim_cur;  // div(rho psi^2 A), re/im parts
  int excluded = 0;
};

void build_surrogates(const Grid& g, const ComplexState& s, const ModelParams& prm, Exec ex,
                      ComplexSurrogates& out) {
  out.n = Field(g);
  for_all(g, ex, [&](int i, int j) {
    out.n(i, j) = s.psi_re(i, j) * s.psi_re(i, j) + s.psi_im(i, j) * s.psi_im(i, j);
  });

  Vec3Field gre(g), gim(g);
  grad(g, s.psi_re, gre, ex);
  grad(g, s.psi_im, gim, ex);

  // w = n A - Im(psi* grad psi)/kappa, Im(psi* grad psi) = re grad im - im grad re
  out.w = Vec3Field(g);
  for_interior(g, ex, [&](int i, int j) {
    const double re = s.psi_re(i, j), im = s.psi_im(i, j);
    out.w.x(i, j) = out.n(i, j) * s.A.x(i, j) - (re * gim.x(i, j) - im * gre.x(i, j)) / prm.kappa;
    out.w.y(i, j) = out.n(i, j) * s.A.y(i, j) - (re * gim.y(i, j) - im * gre.y(i, j)) / prm.kappa;
    out.w.z(i, j) = out.n(i, j) * s.A.z(i, j) - (re * gim.z(i, j) - im * gre.z(i, j)) / prm.kappa;
  });
  fill_ghosts_vector(g, out.w, VecRule::free_normal);

  // capillary surrogate: N = 2 Re(psi* grad psi), tensor = N (x) N / (4 n),
  // excluded (zeroed) where n < eps_reg since the identity divides by |psi|^2
  Vec3Field nvec(g);
  for_interior(g, ex, [&](int i, int j) {
    const double re = s.psi_re(i, j), im = s.psi_im(i, j);
    nvec.x(i, j) = 2.0 * (re * gre.x(i, j) + im * gim.x(i, j));
    nvec.y(i, j) = 2.0 * (re * gre.y(i, j) + im * gim.y(i, j));
    nvec.z(i, j) = 2.0 * (re * gre.z(i, j) + im * gim.z(i, j));
  });
  fill_ghosts_vector(g, nvec, VecRule::free_normal);
  out.cap = SymTensorField(g);
  int excl = 0;
  for (int j = 0; j < g.nyg(); ++j)
    for (int i = 0; i < g.nxg(); ++i) {
      const double n = out.n(i, j);
      if (n < prm.eps_reg) {
        ++excl;
        continue;  // fields were zero-initialized
      }
      const double s4 = 1.0 / (4.0 * n);
      const double nx = nvec.x(i, j), ny = nvec.y(i, j), nz = nvec.z(i, j);
      out.cap.xx(i, j) = nx * nx * s4;
      out.cap.xy(i, j) = nx * ny * s4;
      out.cap.xz(i, j) = nx * nz * s4;
      out.cap.yy(i, j) = ny * ny * s4;
      out.cap.yz(i, j) = ny * nz * s4;
      out.cap.zz(i, j) = nz * nz * s4;
    }
  out.excluded = excl;

  // current divergence for the psi equation: div(rho psi^2 A)
  Vec3Field vre(g), vim(g);
  for_all(g, ex, [&](int i, int j) {
    const double re = s.psi_re(i, j), im = s.psi_im(i, j);
    const double s2re = s.rho(i, j) * (re * re - im * im);
    const double s2im = s.rho(i, j) * (2.0 * re * im);
    vre.x(i, j) = s2re * s.A.x(i, j);
    vre.y(i, j) = s2re * s.A.y(i, j);
    vre.z(i, j) = s2re * s.A.z(i, j);
    vim.x(i, j) = s2im * s.A.x(i, j);
    vim.y(i, j) = s2im * s.A.y(i, j);
    vim.z(i, j) = s2im * s.A.z(i, j);
  });
  out.dre_cur = Field(g);
  out.dim_cur = Field(g);
  div(g, vre, out.dre_cur, ex);
  div(g, vim, out.dim_cur, ex);

  // algebraic potential: transformed continuity of the superfluid current
  Vec3Field cw(g);
  for_all(g, ex, [&](int i, int j) {
    const double r = s.rho(i, j);
    cw.x(i, j) = r * out.w.x(i, j);
    cw.y(i, j) = r * out.w.y(i, j);
    cw.z(i, j) = r * out.w.z(i, j);
  });
  Field d(g);
  div(g, cw, d, ex);
  out.phi_pot = Field(g);
  const double tk2 = prm.tau * prm.kappa * prm.kappa;
  for_interior(g, ex, [&](int i, int j) {
    const double rn = s.rho(i, j) * out.n(i, j);
    out.phi_pot(i, j) = -d(i, j) / (tk2 * (rn + prm.eps_reg));
  });
  fill_ghosts_scalar(g, out.phi_pot);
}

}  // namespace

void ComplexStepper::evaluate(ComplexState& s, Rates& r) {
  const Grid& g = grid_;
  const Exec ex = cfg_.exec;
  apply_bcs(s, prm_);

  ComplexSurrogates su;
  build_surrogates(g, s, prm_, ex, su);
  r.phi_pot = su.phi_pot;
  r.excluded = su.excluded;
  s.phi_pot = su.phi_pot;

  // psi equation
  Field dcg_re(g), dcg_im(g);
  div_coeff_grad(g, s.rho, s.psi_re, dcg_re, ex);
  div_coeff_grad(g, s.rho, s.psi_im, dcg_im, ex);
  const double kappa2 = prm_.kappa * prm_.kappa;
  r.re_dot = Field(g);
  r.im_dot = Field(g);
  for_interior(g, ex, [&](int i, int j) {
    const double rr = s.rho(i, j);
    const double re = s.psi_re(i, j), im = s.psi_im(i, j);
    const double coef = -rr * (prm_.theta_lambda * (su.n(i, j) - 1.0) + s.theta(i, j) +
                               prm_.lambda * s.p(i, j) - norm2(s.vn.at(i, j))) -
                        rr * norm2(s.A.at(i, j));
    const double denom = su.n(i, j) + prm_.eps_reg;
    const double cur_re = (su.dre_cur(i, j) * re + su.dim_cur(i, j) * im) / denom;
    const double cur_im = (su.dim_cur(i, j) * re - su.dre_cur(i, j) * im) / denom;
    const double pp = su.phi_pot(i, j);
    const double rhs_re =
        dcg_re(i, j) / kappa2 + cur_im / prm_.kappa + prm_.tau * prm_.kappa * rr * im * pp +
        coef * re;
    const double rhs_im =
        dcg_im(i, j) / kappa2 - cur_re / prm_.kappa - prm_.tau * prm_.kappa * rr * re * pp +
        coef * im;
    r.re_dot(i, j) = rhs_re / (prm_.tau * rr);
    r.im_dot(i, j) = rhs_im / (prm_.tau * rr);
  });
  r.dre_dt = r.re_dot;
  r.dim_dt = r.im_dot;
  if (cfg_.material_derivative == StepConfig::Dots::advective) {
    Field adv(g);
    convect(g, s.vn, s.psi_re, adv, ex);
    for_interior(g, ex, [&](int i, int j) { r.dre_dt(i, j) -= adv(i, j); });
    convect(g, s.vn, s.psi_im, adv, ex);
    for_interior(g, ex, [&](int i, int j) { r.dim_dt(i, j) -= adv(i, j); });
  }

  // A equation (gauge image of the v_s equation, same kernel shape)
  Vec3Field gps(g), gth(g), crl(g);
  grad(g, su.phi_pot, gps, ex);
  grad(g, s.theta, gth, ex);
  curl(g, s.vn, crl, ex);
  r.A_dot = Vec3Field(g);
  Vec3Field u(g);
  for_interior(g, ex, [&](int i, int j) {
    const double rr = s.rho(i, j);
    const double vx = -gps.x(i, j) - crl.x(i, j) - rr * su.w.x(i, j) + gth.x(i, j);
    const double vy = -gps.y(i, j) - crl.y(i, j) - rr * su.w.y(i, j) + gth.y(i, j);
    const double vz = -gps.z(i, j) - crl.z(i, j) - rr * su.w.z(i, j) + gth.z(i, j);
    r.A_dot.x(i, j) = vx;
    r.A_dot.y(i, j) = vy;
    r.A_dot.z(i, j) = vz;
    u.x(i, j) = vx + gps.x(i, j) - gth.x(i, j);
    u.y(i, j) = vy + gps.y(i, j) - gth.y(i, j);
    u.z(i, j) = vz + gps.z(i, j) - gth.z(i, j);
  });
  r.dA_dt = r.A_dot;
  if (cfg_.material_derivative == StepConfig::Dots::advective) {
    Vec3Field adv(g);
    convect_vec(g, s.vn, s.A, adv, ex);
    for_interior(g, ex, [&](int i, int j) {
      r.dA_dt.x(i, j) -= adv.x(i, j);
      r.dA_dt.y(i, j) -= adv.y(i, j);
      r.dA_dt.z(i, j) -= adv.z(i, j);
    });
  }

  Field phiphidot(g), d2(g);
  for_interior(g, ex, [&](int i, int j) {
    const double re = s.psi_re(i, j), im = s.psi_im(i, j);
    phiphidot(i, j) = re * r.re_dot(i, j) + im * r.im_dot(i, j);
    const double pp = su.phi_pot(i, j);
    d2(i, j) = r.re_dot(i, j) * r.re_dot(i, j) + r.im_dot(i, j) * r.im_dot(i, j) +
               kappa2 * su.n(i, j) * pp * pp +
               2.0 * prm_.kappa * pp * (r.im_dot(i, j) * re - r.re_dot(i, j) * im);
  });

  detail::TailIn tin;
  tin.g = &g;
  tin.prm = &prm_;
  tin.dots = cfg_.material_derivative;
  tin.ex = ex;
  tin.vn = &s.vn;
  tin.rho = &s.rho;
  tin.theta = &s.theta;
  tin.n = &su.n;
  tin.w = &su.w;
  tin.cap = &su.cap;
  tin.phi_phidot = &phiphidot;
  tin.d2 = &d2;
  tin.u = &u;
  detail::tail_rates(tin, r.tail);
}

ComplexState ComplexStepper::advance(const ComplexState& s0, Rates& r, double delta, int stage,
                                     double* resid_out) {
  ComplexState s = s0;
  s.t = s0.t + delta;
  const Grid& g = grid_;

  if (!cfg_.pin_phi)
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) {
        s.psi_re(i, j) += delta * r.dre_dt(i, j);
        s.psi_im(i, j) += delta * r.dim_dt(i, j);
      }
  if (!cfg_.pin_vs)
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) {
        s.A.x(i, j) += delta * r.dA_dt.x(i, j);
        s.A.y(i, j) += delta * r.dA_dt.y(i, j);
        s.A.z(i, j) += delta * r.dA_dt.z(i, j);
      }
  if (!cfg_.pin_rho)
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) {
        s.rho(i, j) += delta * r.tail.drho_dt(i, j);
        if (!(s.rho(i, j) > 0.0))
          throw StepFailure(stage, "rho", "density lost positivity", s.rho(i, j));
      }
  if (!cfg_.pin_theta)
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) {
        s.theta(i, j) += delta * r.tail.dtheta_dt(i, j);
        if (!(s.theta(i, j) > 0.0))
          throw StepFailure(stage, "theta", "temperature lost positivity", s.theta(i, j));
      }
  if (!cfg_.pin_vn) {
    if (r.tail.min_mass < cfg_.eps_mass)
      throw StepFailure(stage, "vn", "degenerate normal mass rho(1-|psi|^2)", r.tail.min_mass);
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) {
        s.vn.x(i, j) += delta * r.tail.dvn_dt_nop.x(i, j);
        s.vn.y(i, j) += delta * r.tail.dvn_dt_nop.y(i, j);
        s.vn.z(i, j) += delta * r.tail.dvn_dt_nop.z(i, j);
      }
    detail::ProjectionIn pin;
    pin.g = &g;
    pin.mass = &r.tail.mass;
    pin.target = &r.tail.target;
    pin.delta = delta;
    pin.tol = cfg_.projection_tol;
    pin.max_iter = cfg_.max_cg_iter;
    pin.ex = cfg_.exec;
    pin.stage = stage;
    detail::ProjectionOut pout = detail::project_velocity(pin, s.vn, s.p, q_warm_);
    if (resid_out) *resid_out = pout.constraint_residual;
  }
  apply_bcs(s, prm_);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i)
      if (!std::isfinite(s.psi_re(i, j)) || !std::isfinite(s.theta(i, j)))
        throw StepFailure(stage, "state", "non-finite value", 0.0);
  return s;
}

ComplexStepResult ComplexStepper::step(const ComplexState& s0_in) {
  ComplexState s0 = s0_in;
  Rates r1, r2;
  evaluate(s0, r1);
  ComplexState sh = advance(s0, r1, 0.5 * cfg_.dt, 1, nullptr);
  evaluate(sh, r2);
  double resid = 0.0;
  ComplexState s1 = advance(s0, r2, cfg_.dt, 2, &resid);

  // refresh the published algebraic potential
  {
    ComplexSurrogates su;
    build_surrogates(grid_, s1, prm_, cfg_.exec, su);
    s1.phi_pot = su.phi_pot;
    apply_bcs(s1, prm_);
  }

  ComplexStepResult out{std::move(s1), resid, interior_min(grid_, r2.tail.sigma), 0.0};
  double mp = 0.0;
  for (int j = 1; j <= grid_.ny; ++j)
    for (int i = 1; i <= grid_.nx; ++i)
      mp = std::max(mp, out.state.psi_re(i, j) * out.state.psi_re(i, j) +
                            out.state.psi_im(i, j) * out.state.psi_im(i, j));
  out.max_psi_sq = mp;
  return out;
}

ComplexStepResult complex_step(const ComplexState& s0, const StepConfig& cfg,
                               const ModelParams& prm) {
  ComplexStepper st(s0.grid, cfg, prm);
  return st.step(s0);
}

// ---------------------------------------------------------------------------

double IdentityReport::max_residual() const {
  return std::max({potential_rate, current, phase_rate, dissipation, capillary});
}

IdentityReport check_identities(const FieldState& real_in, const ComplexState& cplx_in,
                                const GaugeField& /*chi: carried by the states*/,
                                const ModelParams& prm,
                                const StepConfig& cfg) {
  IdentityReport rep;
  const Grid& g = real_in.grid;
  FieldState real = real_in;
  ComplexState cplx = cplx_in;
  apply_bcs(real, prm);
  apply_bcs(cplx, prm);

  // real-side rates
  Field m(g), phi_dot(g);
  tilt_m(real, prm, m);
  phase_rhs(real, m, prm, phi_dot);
  Vec3Field vs_dot(g);
  vs_rhs(real, prm, vs_dot);

  // complex-side rates, evaluated with the state's own phi_pot (the gauge
  // image), not the algebraic closure, so time-dependent gauges check out
  ComplexSurrogates su;
  {
    Exec ex = cfg.exec;
    build_surrogates(g, cplx, prm, ex, su);
  }
  Vec3Field gpot(g), gth(g), crl(g);
  grad(g, cplx.phi_pot, gpot, Exec::serial);
  grad(g, cplx.theta, gth, Exec::serial);
  curl(g, cplx.vn, crl, Exec::serial);
  Vec3Field A_dot(g);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      const double rr = cplx.rho(i, j);
      A_dot.x(i, j) = -gpot.x(i, j) - crl.x(i, j) - rr * su.w.x(i, j) + gth.x(i, j);
      A_dot.y(i, j) = -gpot.y(i, j) - crl.y(i, j) - rr * su.w.y(i, j) + gth.y(i, j);
      A_dot.z(i, j) = -gpot.z(i, j) - crl.z(i, j) - rr * su.w.z(i, j) + gth.z(i, j);
    }
  // psi rates from the transformed phase equation with the stored phi_pot
  Field re_dot(g), im_dot(g);
  {
    Field dcg_re(g), dcg_im(g);
    div_coeff_grad(g, cplx.rho, cplx.psi_re, dcg_re, Exec::serial);
    div_coeff_grad(g, cplx.rho, cplx.psi_im, dcg_im, Exec::serial);
    const double kappa2 = prm.kappa * prm.kappa;
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) {
        const double rr = cplx.rho(i, j);
        const double re = cplx.psi_re(i, j), im = cplx.psi_im(i, j);
        const double coef =
            -rr * (prm.theta_lambda * (su.n(i, j) - 1.0) + cplx.theta(i, j) +
                   prm.lambda * cplx.p(i, j) - norm2(cplx.vn.at(i, j))) -
            rr * norm2(cplx.A.at(i, j));
        const double denom = su.n(i, j) + prm.eps_reg;
        const double cur_re = (su.dre_cur(i, j) * re + su.dim_cur(i, j) * im) / denom;
        const double cur_im = (su.dim_cur(i, j) * re - su.dre_cur(i, j) * im) / denom;
        const double pp = cplx.phi_pot(i, j);
        re_dot(i, j) = (dcg_re(i, j) / kappa2 + cur_im / prm.kappa +
                        prm.tau * prm.kappa * rr * im * pp + coef * re) /
                       (prm.tau * rr);
        im_dot(i, j) = (dcg_im(i, j) / kappa2 - cur_re / prm.kappa -
                        prm.tau * prm.kappa * rr * re * pp + coef * im) /
                       (prm.tau * rr);
      }
  }

  Vec3Field gps(g);
  grad(g, real.phi_s, gps, Exec::serial);
  Vec3Field b(g);
  grad(g, real.phi, b, Exec::serial);
  const double kappa2 = prm.kappa * prm.kappa;

  int excluded = 0;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      const double re = cplx.psi_re(i, j), im = cplx.psi_im(i, j);
      const double ph = real.phi(i, j);
      // 1: vs_dot + grad phi_s  ==  A_dot + grad phi_pot
      for (int c = 0; c < 3; ++c) {
        const Field* vd[3] = {&vs_dot.x, &vs_dot.y, &vs_dot.z};
        const Field* ad[3] = {&A_dot.x, &A_dot.y, &A_dot.z};
        const Field* g1[3] = {&gps.x, &gps.y, &gps.z};
        const Field* g2[3] = {&gpot.x, &gpot.y, &gpot.z};
        rep.potential_rate =
            std::max(rep.potential_rate, std::fabs(((*vd[c])(i, j) + (*g1[c])(i, j)) -
                                                   ((*ad[c])(i, j) + (*g2[c])(i, j))));
      }
      // 2: phi^2 v_s == |psi|^2 A - Im(psi* grad psi)/kappa (the current w)
      const double p2 = ph * ph;
      rep.current = std::max({rep.current, std::fabs(p2 * real.vs.x(i, j) - su.w.x(i, j)),
                              std::fabs(p2 * real.vs.y(i, j) - su.w.y(i, j)),
                              std::fabs(p2 * real.vs.z(i, j) - su.w.z(i, j))});
      // 3: phi phi_dot == Re(psi* psi_dot)
      rep.phase_rate = std::max(
          rep.phase_rate,
          std::fabs(ph * phi_dot(i, j) - (re * re_dot(i, j) + im * im_dot(i, j))));
      // 4: phi_dot^2 + kappa^2 phi^2 phi_s^2 == |psi_dot|^2 + kappa^2 |psi|^2
      //    phi_pot^2 + 2 kappa phi_pot Im(psi_dot psi*)
      const double ps = real.phi_s(i, j), pp = cplx.phi_pot(i, j);
      const double lhs4 = phi_dot(i, j) * phi_dot(i, j) + kappa2 * p2 * ps * ps;
      const double rhs4 = re_dot(i, j) * re_dot(i, j) + im_dot(i, j) * im_dot(i, j) +
                          kappa2 * su.n(i, j) * pp * pp +
                          2.0 * prm.kappa * pp * (im_dot(i, j) * re - re_dot(i, j) * im);
      rep.dissipation = std::max(rep.dissipation, std::fabs(lhs4 - rhs4));
      // 5: grad phi (x) grad phi == N (x) N / (4 |psi|^2), skipped near zeros
      if (su.n(i, j) < prm.eps_reg) {
        ++excluded;
      } else {
        const double bx = b.x(i, j), by = b.y(i, j), bz = b.z(i, j);
        rep.capillary = std::max({rep.capillary, std::fabs(bx * bx - su.cap.xx(i, j)),
                                  std::fabs(bx * by - su.cap.xy(i, j)),
                                  std::fabs(bx * bz - su.cap.xz(i, j)),
                                  std::fabs(by * by - su.cap.yy(i, j)),
                                  std::fabs(by * bz - su.cap.yz(i, j)),
                                  std::fabs(bz * bz - su.cap.zz(i, j))});
      }
    }
  rep.excluded_cells = excluded;
  return rep;
}

Observables observables(const ComplexState& s, const GaugeField& chi, double kappa) {
  const Grid& g = s.grid;
  Observables o{Field(g), Vec3Field(g), Field(g), s.vn, s.p, s.rho, s.theta};
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      o.n(i, j) = s.psi_re(i, j) * s.psi_re(i, j) + s.psi_im(i, j) * s.psi_im(i, j);
      const Vec3 gc = chi.grad_chi(g.x(i), g.y(j), s.t);
      o.vs.x(i, j) = s.A.x(i, j) - gc.x / kappa;
      o.vs.y(i, j) = s.A.y(i, j) - gc.y / kappa;
      o.vs.z(i, j) = s.A.z(i, j) - gc.z / kappa;
      o.phi_s(i, j) = s.phi_pot(i, j) + chi.chi_dot(g.x(i), g.y(j), s.t) / kappa;
    }
  return o;
}

double ObservableDelta::max() const {
  return std::max({n, vs, phi_s, vn, p, rho, theta});
}

ObservableDelta compare_observables(const Observables& a, const Observables& b) {
  ObservableDelta d;
  const Field& ref = a.n;
  const int nx = ref.nxg - 2, ny = ref.nyg - 2;
  auto upd = [&](double& acc, double va, double vb) {
    acc = std::max(acc, std::fabs(va - vb));
  };
  for (int j = 1; j <= ny; ++j)
    for (int i = 1; i <= nx; ++i) {
      upd(d.n, a.n(i, j), b.n(i, j));
      upd(d.vs, a.vs.x(i, j), b.vs.x(i, j));
      upd(d.vs, a.vs.y(i, j), b.vs.y(i, j));
      upd(d.vs, a.vs.z(i, j), b.vs.z(i, j));
      upd(d.phi_s, a.phi_s(i, j), b.phi_s(i, j));
      upd(d.vn, a.vn.x(i, j), b.vn.x(i, j));
      upd(d.vn, a.vn.y(i, j), b.vn.y(i, j));
      upd(d.vn, a.vn.z(i, j), b.vn.z(i, j));
      upd(d.p, a.p(i, j), b.p(i, j));
      upd(d.rho, a.rho(i, j), b.rho(i, j));
      upd(d.theta, a.theta(i, j), b.theta(i, j));
    }
  return d;
}

std::vector<DualRunRow> gauge_dual_run(const FieldState& s0, const GaugeField& chi1,
                                       const GaugeField& chi2, int steps,
                                       const StepConfig& cfg, const ModelParams& prm) {
  ComplexStepper st1(s0.grid, cfg, prm), st2(s0.grid, cfg, prm);
  ComplexState a = gauge_forward(s0, chi1, prm);
  ComplexState b = gauge_forward(s0, chi2, prm);
  std::vector<DualRunRow> rows;
  rows.reserve(steps);
  for (int k = 0; k < steps; ++k) {
    a = st1.step(a).state;
    b = st2.step(b).state;
    DualRunRow row;
    row.t = a.t;
    row.delta = compare_observables(observables(a, chi1, prm.kappa),
                                    observables(b, chi2, prm.kappa));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hegl
