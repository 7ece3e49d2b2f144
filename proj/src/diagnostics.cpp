#include "hegl/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "hegl/dynamics.hpp"
#include "hegl/ops.hpp"
#include "hegl/thermo.hpp"

namespace hegl {

namespace {

// X = |grad phi|^2 / (2 kappa^2) + theta_lambda F(phi), assembled at every
// cell from the rule-filled gradient surrogate.
void structure_energy(const Grid& g, const Field& phi, const Vec3Field& b, double kappa,
                      double theta_l, Field& out) {
  const double k2 = 2.0 * kappa * kappa;
  for_all(g, Exec::serial, [&](int i, int j) {
    const double p2 = phi(i, j) * phi(i, j);
    out(i, j) = (b.x(i, j) * b.x(i, j) + b.y(i, j) * b.y(i, j) + b.z(i, j) * b.z(i, j)) / k2 +
                theta_l * (0.25 * p2 * p2 - 0.5 * p2);
  });
}

void total_energy_field(const Grid& g, const FieldState& s, const Vec3Field& b,
                        const ModelParams& prm, Field& out) {
  structure_energy(g, s.phi, b, prm.kappa, prm.theta_lambda, out);
  for_all(g, Exec::serial, [&](int i, int j) {
    const double p2 = s.phi(i, j) * s.phi(i, j);
    out(i, j) += prm.c0 * s.theta(i, j) + 0.5 * p2 * norm2(s.vs.at(i, j)) +
                 0.5 * (1.0 - p2) * norm2(s.vn.at(i, j));
  });
}

void grad_surrogate(const Grid& g, const Field& phi, Vec3Field& b) {
  grad(g, phi, b, Exec::serial);
  fill_ghosts_vector(g, b, VecRule::free_normal);
}

// discrete material derivative: (f1 - f0)/dt (+ vn . grad f1 in advective mode)
void ddt(const Grid& g, const Field& f1, const Field& f0, const Vec3Field& vn, double dt,
         DotMode mode, Field& out) {
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) out(i, j) = (f1(i, j) - f0(i, j)) / dt;
  if (mode == DotMode::advective) {
    Field adv(g);
    convect(g, vn, f1, adv, Exec::serial);
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) out(i, j) += adv(i, j);
  }
}

void ddt_vec(const Grid& g, const Vec3Field& f1, const Vec3Field& f0, const Vec3Field& vn,
             double dt, DotMode mode, Vec3Field& out) {
  ddt(g, f1.x, f0.x, vn, dt, mode, out.x);
  ddt(g, f1.y, f0.y, vn, dt, mode, out.y);
  ddt(g, f1.z, f0.z, vn, dt, mode, out.z);
}

}  // namespace

PowerAudit power_audit(const FieldState& s_new, const FieldState& s_prev, double dt,
                       const ModelParams& prm, DotMode mode) {
  const Grid& g = s_new.grid;
  FieldState s1 = s_new;
  FieldState s0 = s_prev;
  apply_bcs(s1, prm);
  apply_bcs(s0, prm);
  const double kappa2 = prm.kappa * prm.kappa;

  Vec3Field b1(g), b0(g);
  grad_surrogate(g, s1.phi, b1);
  grad_surrogate(g, s0.phi, b0);

  Field x1(g), x0(g);
  structure_energy(g, s1.phi, b1, prm.kappa, prm.theta_lambda, x1);
  structure_energy(g, s0.phi, b0, prm.kappa, prm.theta_lambda, x0);
  fill_ghosts_scalar(g, x1);

  Field e1(g), e0(g);
  total_energy_field(g, s1, b1, prm, e1);
  total_energy_field(g, s0, b0, prm, e0);
  fill_ghosts_scalar(g, e1);

  Field phidot(g), thetadot(g), xdot(g), edot(g);
  ddt(g, s1.phi, s0.phi, s1.vn, dt, mode, phidot);
  ddt(g, s1.theta, s0.theta, s1.vn, dt, mode, thetadot);
  ddt(g, x1, x0, s1.vn, dt, mode, xdot);
  ddt(g, e1, e0, s1.vn, dt, mode, edot);

  Vec3Field vsdot(g), vndot(g);
  ddt_vec(g, s1.vs, s0.vs, s1.vn, dt, mode, vsdot);
  ddt_vec(g, s1.vn, s0.vn, s1.vn, dt, mode, vndot);

  Field vn2_1(g), vn2_0(g), vn2dot(g);
  for_all(g, Exec::serial, [&](int i, int j) {
    vn2_1(i, j) = norm2(s1.vn.at(i, j));
    vn2_0(i, j) = norm2(s0.vn.at(i, j));
  });
  ddt(g, vn2_1, vn2_0, s1.vn, dt, mode, vn2dot);

  Vec3Field gp(g), gps(g), gth(g);
  grad(g, s1.p, gp, Exec::serial);
  grad(g, s1.phi_s, gps, Exec::serial);
  grad(g, s1.theta, gth, Exec::serial);

  SymTensorField cap(g);
  outer_product(g, b1, cap, Exec::serial);
  Field contraction(g);
  gradv_contract(g, s1.vn, cap, contraction, Exec::serial);
  Field divvn(g);
  div(g, s1.vn, divvn, Exec::serial);

  PowerAudit out;
  double fl = 0.0;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      const double rho = s1.rho(i, j), th = s1.theta(i, j), ph = s1.phi(i, j);
      const double p2 = ph * ph;
      const Vec3 vs = s1.vs.at(i, j), vn = s1.vn.at(i, j);
      const double pd = phidot(i, j);
      const Vec3 u{vsdot.x(i, j) + gps.x(i, j) - gth.x(i, j),
                   vsdot.y(i, j) + gps.y(i, j) - gth.y(i, j),
                   vsdot.z(i, j) + gps.z(i, j) - gth.z(i, j)};
      const double ps = s1.phi_s(i, j);
      const double vngp = vn.x * gp.x(i, j) + vn.y * gp.y(i, j) + vn.z * gp.z(i, j);

      const double pi_phi = rho * xdot(i, j) + rho * (th + norm2(vs) - norm2(vn)) * ph * pd -
                            vngp + prm.tau * rho * pd * pd + contraction(i, j) / kappa2;

      const double vnvndot =
          vn.x * vndot.x(i, j) + vn.y * vndot.y(i, j) + vn.z * vndot.z(i, j);
      const double vsvsdot =
          vs.x * vsdot.x(i, j) + vs.y * vsdot.y(i, j) + vs.z * vsdot.z(i, j);
      const double counter = (vs.x - vn.x) * gth.x(i, j) + (vs.y - vn.y) * gth.y(i, j) +
                             (vs.z - vn.z) * gth.z(i, j);
      const double pi_vs = norm2(u) + 0.5 * rho * vn2dot(i, j) - rho * p2 * vnvndot +
                           prm.nu * divvn(i, j) * divvn(i, j) + vngp -
                           contraction(i, j) / kappa2 + rho * p2 * vsvsdot +
                           prm.tau * kappa2 * rho * p2 * ps * ps - rho * p2 * counter;

      const double rho_h = rho * prm.c0 * thetadot(i, j) - rho * th * ph * pd -
                           prm.tau * rho * pd * pd - norm2(u) -
                           prm.nu * divvn(i, j) * divvn(i, j) -
                           prm.tau * kappa2 * rho * p2 * ps * ps + rho * p2 * counter;

      out.P_i_phi += pi_phi;
      out.P_i_vs += pi_vs;
      fl += rho * edot(i, j) - pi_phi - pi_vs - rho_h;
    }
  const double vol = g.cell_volume();
  out.P_i_phi *= vol;
  out.P_i_vs *= vol;
  out.first_law_residual = fl * vol;

  // external powers: divergence-form fluxes, rule-filled, plus the body force
  Vec3Field cphi(g);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      const double c = s1.rho(i, j) * phidot(i, j) / kappa2;
      cphi.x(i, j) = c * b1.x(i, j) - s1.p(i, j) * s1.vn.x(i, j);
      cphi.y(i, j) = c * b1.y(i, j) - s1.p(i, j) * s1.vn.y(i, j);
      cphi.z(i, j) = c * b1.z(i, j) - s1.p(i, j) * s1.vn.z(i, j);
    }
  fill_ghosts_vector(g, cphi, VecRule::free_normal);
  Field dc(g);
  div(g, cphi, dc, Exec::serial);
  out.P_e_phi = integral(g, dc);

  Vec3Field br(g);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      const Vec3 vn = s1.vn.at(i, j), vs = s1.vs.at(i, j);
      const Vec3 vd = vsdot.at(i, j), gp_s = gps.at(i, j), gt = gth.at(i, j);
      const double p2 = s1.phi(i, j) * s1.phi(i, j);
      const double ps = s1.phi_s(i, j);
      // vn x (vsdot + grad phi_s - grad theta)
      const Vec3 a{vd.x + gp_s.x - gt.x, vd.y + gp_s.y - gt.y, vd.z + gp_s.z - gt.z};
      Vec3 v;
      v.x = vn.y * a.z - vn.z * a.y;
      v.y = vn.z * a.x - vn.x * a.z;
      v.z = vn.x * a.y - vn.y * a.x;
      const double dvn = divvn(i, j);
      v.x += -prm.nu * vn.x * dvn +
             (cap.xx(i, j) * vn.x + cap.xy(i, j) * vn.y + cap.xz(i, j) * vn.z) / kappa2 +
             s1.rho(i, j) * p2 * vs.x * ps;
      v.y += -prm.nu * vn.y * dvn +
             (cap.xy(i, j) * vn.x + cap.yy(i, j) * vn.y + cap.yz(i, j) * vn.z) / kappa2 +
             s1.rho(i, j) * p2 * vs.y * ps;
      v.z += -prm.nu * vn.z * dvn +
             (cap.xz(i, j) * vn.x + cap.yz(i, j) * vn.y + cap.zz(i, j) * vn.z) / kappa2 +
             s1.rho(i, j) * p2 * vs.z * ps;
      br.set(i, j, v);
    }
  fill_ghosts_vector(g, br, VecRule::free_normal);
  Field dbr(g);
  div(g, br, dbr, Exec::serial);
  double pe_vs = 0.0;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i)
      pe_vs += -dbr(i, j) + s1.rho(i, j) * dot(prm.g, s1.vn.at(i, j));
  out.P_e_vs = pe_vs * vol;
  return out;
}

void entropy_production(const FieldState& s_in, const Field& phi_dot, const Vec3Field& vs_dot,
                        const ModelParams& prm, Field& sigma_out) {
  FieldState s = s_in;
  apply_bcs(s, prm);
  const Grid& g = s.grid;
  Vec3Field gps(g), gth(g);
  grad(g, s.phi_s, gps, Exec::serial);
  grad(g, s.theta, gth, Exec::serial);
  Field divvn(g);
  div(g, s.vn, divvn, Exec::serial);
  sigma_out = Field(g);
  const double kappa2 = prm.kappa * prm.kappa;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      const double rho = s.rho(i, j), th = s.theta(i, j), pd = phi_dot(i, j);
      const double p2 = s.phi(i, j) * s.phi(i, j), ps = s.phi_s(i, j);
      const Vec3 u{vs_dot.x(i, j) + gps.x(i, j) - gth.x(i, j),
                   vs_dot.y(i, j) + gps.y(i, j) - gth.y(i, j),
                   vs_dot.z(i, j) + gps.z(i, j) - gth.z(i, j)};
      sigma_out(i, j) = prm.tau * rho * pd * pd + norm2(u) +
                        prm.nu * divvn(i, j) * divvn(i, j) +
                        prm.tau * kappa2 * rho * p2 * ps * ps +
                        (prm.k0(th) / th) * norm2(gth.at(i, j));
    }
}

namespace {

// One boundary face: interior cell (ii,ji), ghost cell (ig,jg), outward
// normal nrm, spacing h across the face, area element da.
struct FaceCtx {
  int ii, ji, ig, jg;
  Vec3 nrm;
  double h;
  double da;
};

template <class F>
void for_faces(const Grid& g, F&& f) {
  const double day = (g.dim == 2) ? g.hy : 1.0;
  for (int j = 1; j <= g.ny; ++j) {
    f(FaceCtx{1, j, 0, j, {-1, 0, 0}, g.hx, day});
    f(FaceCtx{g.nx, j, g.nx + 1, j, {1, 0, 0}, g.hx, day});
  }
  if (g.dim == 2) {
    for (int i = 1; i <= g.nx; ++i) {
      f(FaceCtx{i, 1, i, 0, {0, -1, 0}, g.hy, g.hx});
      f(FaceCtx{i, g.ny, i, g.ny + 1, {0, 1, 0}, g.hy, g.hx});
    }
  }
}

double favg(const Field& f, const FaceCtx& c) { return 0.5 * (f(c.ig, c.jg) + f(c.ii, c.ji)); }
double fdn(const Field& f, const FaceCtx& c) { return (f(c.ig, c.jg) - f(c.ii, c.ji)) / c.h; }
Vec3 favg(const Vec3Field& v, const FaceCtx& c) {
  return {favg(v.x, c), favg(v.y, c), favg(v.z, c)};
}

}  // namespace

std::array<double, 5> boundary_flux_audit(const FieldState& s, const ModelParams& prm) {
  const Grid& g = s.grid;
  // instantaneous material rates for the flux expressions
  Field m(g), phidot(g);
  tilt_m(s, prm, m);
  phase_rhs(s, m, prm, phidot);
  fill_ghosts_scalar(g, phidot);
  Vec3Field vsdot(g);
  vs_rhs(s, prm, vsdot);
  fill_ghosts_vector(g, vsdot, VecRule::free_normal);

  FieldState sc = s;  // audited as-is: ghosts are NOT re-imposed here
  const double kappa2 = prm.kappa * prm.kappa;

  Vec3Field gps(g), gth(g);
  grad(g, sc.phi_s, gps, Exec::serial);
  grad(g, sc.theta, gth, Exec::serial);
  fill_ghosts_vector(g, gps, VecRule::free_normal);
  fill_ghosts_vector(g, gth, VecRule::free_normal);
  Field divvn(g);
  div(g, sc.vn, divvn, Exec::serial);
  fill_ghosts_scalar(g, divvn);
  Vec3Field b(g);
  grad(g, sc.phi, b, Exec::serial);
  fill_ghosts_vector(g, b, VecRule::free_normal);

  double fq = 0, fphase = 0, fpvn = 0, fvs = 0, fcurl = 0;
  for_faces(g, [&](const FaceCtx& c) {
    const double thf = favg(sc.theta, c);
    const double rhof = favg(sc.rho, c);
    const double phif = favg(sc.phi, c);
    const double p2f = phif * phif;
    const Vec3 vsf = favg(sc.vs, c);
    const Vec3 vnf = favg(sc.vn, c);
    const double dthdn = fdn(sc.theta, c);
    const double dphidn = fdn(sc.phi, c);

    // q . n = -k0 dtheta/dn - rho phi^2 theta (vs - vn) . n
    fq += (-prm.k0(thf) * dthdn - rhof * p2f * thf * dot(vsf - vnf, c.nrm)) * c.da;

    // (rho phidot grad phi / kappa^2) . n
    fphase += (rhof * favg(phidot, c) * dphidn / kappa2) * c.da;

    // (p vn) . n
    fpvn += favg(sc.p, c) * dot(vnf, c.nrm) * c.da;

    // P^e_vs bracket . n
    const Vec3 af{favg(vsdot.x, c) + favg(gps.x, c) - favg(gth.x, c),
                  favg(vsdot.y, c) + favg(gps.y, c) - favg(gth.y, c),
                  favg(vsdot.z, c) + favg(gps.z, c) - favg(gth.z, c)};
    Vec3 cr{vnf.y * af.z - vnf.z * af.y, vnf.z * af.x - vnf.x * af.z,
            vnf.x * af.y - vnf.y * af.x};
    const double mxx = favg(b.x, c) * favg(b.x, c), mxy = favg(b.x, c) * favg(b.y, c),
                 mxz = favg(b.x, c) * favg(b.z, c), myy = favg(b.y, c) * favg(b.y, c),
                 myz = favg(b.y, c) * favg(b.z, c), mzz = favg(b.z, c) * favg(b.z, c);
    const Vec3 mv{mxx * vnf.x + mxy * vnf.y + mxz * vnf.z,
                  mxy * vnf.x + myy * vnf.y + myz * vnf.z,
                  mxz * vnf.x + myz * vnf.y + mzz * vnf.z};
    const double bn = dot(cr, c.nrm) - prm.nu * dot(vnf, c.nrm) * favg(divvn, c) +
                      dot(mv, c.nrm) / kappa2 +
                      rhof * p2f * favg(sc.phi_s, c) * dot(vsf, c.nrm);
    fvs += bn * c.da;

    // tangential curl trace of v_s: |d v_t / dn| summed over tangential comps
    double ct = 0.0;
    if (c.nrm.x != 0.0) ct = std::fabs(fdn(sc.vs.y, c)) + std::fabs(fdn(sc.vs.z, c));
    else ct = std::fabs(fdn(sc.vs.x, c)) + std::fabs(fdn(sc.vs.z, c));
    fcurl += ct * c.da;
  });
  return {fq, fphase, fpvn, fvs, fcurl};
}

double total_energy(const FieldState& s_in, const ModelParams& prm) {
  FieldState s = s_in;
  apply_bcs(s, prm);
  const Grid& g = s.grid;
  Vec3Field b(g);
  grad_surrogate(g, s.phi, b);
  Field e(g);
  total_energy_field(g, s, b, prm, e);
  Field re(g);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) re(i, j) = s.rho(i, j) * e(i, j);
  return integral(g, re);
}

double total_mass(const FieldState& s) { return integral(s.grid, s.rho); }

double total_entropy(const FieldState& s, const ModelParams& prm) {
  const Grid& g = s.grid;
  Field re(g);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i)
      re(i, j) = s.rho(i, j) * entropy_density(s.phi(i, j), s.theta(i, j), prm);
  return integral(g, re);
}

void write_series_header(std::ostream& os) {
  os << "t,E_total,mass_total,P_i_phi,P_e_phi,P_i_vs,P_e_vs,first_law_residual,"
        "entropy_production_min,constraint_residual,flux_q,flux_phase,flux_pvn,flux_vs\n";
}

void write_series_row(std::ostream& os, const DiagnosticsReport& r) {
  char buf[64];
  const double vals[] = {r.t,
                         r.E_total,
                         r.mass_total,
                         r.P_i_phi,
                         r.P_e_phi,
                         r.P_i_vs,
                         r.P_e_vs,
                         r.first_law_residual,
                         r.entropy_production_min,
                         r.constraint_residual,
                         r.flux_q,
                         r.flux_phase,
                         r.flux_pvn,
                         r.flux_vs};
  bool first = true;
  for (double v : vals) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (!first) os << ',';
    os << buf;
    first = false;
  }
  os << '\n';
}

}  // namespace hegl
