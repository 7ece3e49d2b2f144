#include "hegl/ops.hpp"

namespace hegl {

void grad(const Grid& g, const Field& f, Vec3Field& out, Exec ex) {
  const double cx = 0.5 / g.hx, cy = 0.5 / g.hy;
  for_interior(g, ex, [&](int i, int j) {
    out.x(i, j) = cx * (f(i + 1, j) - f(i - 1, j));
    out.y(i, j) = cy * (f(i, j + 1) - f(i, j - 1));
    out.z(i, j) = 0.0;
  });
}

void div(const Grid& g, const Vec3Field& v, Field& out, Exec ex) {
  const double cx = 0.5 / g.hx, cy = 0.5 / g.hy;
  for_interior(g, ex, [&](int i, int j) {
    out(i, j) = cx * (v.x(i + 1, j) - v.x(i - 1, j)) + cy * (v.y(i, j + 1) - v.y(i, j - 1));
  });
}

void curl(const Grid& g, const Vec3Field& v, Vec3Field& out, Exec ex) {
  // slab mode: d/dz = 0, so
  //   curl = (dy vz, -dx vz, dx vy - dy vx)
  const double cx = 0.5 / g.hx, cy = 0.5 / g.hy;
  for_interior(g, ex, [&](int i, int j) {
    const double dyvz = cy * (v.z(i, j + 1) - v.z(i, j - 1));
    const double dxvz = cx * (v.z(i + 1, j) - v.z(i - 1, j));
    const double dxvy = cx * (v.y(i + 1, j) - v.y(i - 1, j));
    const double dyvx = cy * (v.x(i, j + 1) - v.x(i, j - 1));
    out.x(i, j) = dyvz;
    out.y(i, j) = -dxvz;
    out.z(i, j) = dxvy - dyvx;
  });
}

void lap(const Grid& g, const Field& f, Field& out, Exec ex) {
  const double cx = 1.0 / (g.hx * g.hx), cy = 1.0 / (g.hy * g.hy);
  for_interior(g, ex, [&](int i, int j) {
    out(i, j) = cx * (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) +
                cy * (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1));
  });
}

void lap_vec(const Grid& g, const Vec3Field& v, Vec3Field& out, Exec ex) {
  lap(g, v.x, out.x, ex);
  lap(g, v.y, out.y, ex);
  lap(g, v.z, out.z, ex);
}

void div_coeff_grad(const Grid& g, const Field& coeff, const Field& f, Field& out, Exec ex) {
  const double cx = 1.0 / (g.hx * g.hx), cy = 1.0 / (g.hy * g.hy);
  for_interior(g, ex, [&](int i, int j) {
    const double ce = 0.5 * (coeff(i + 1, j) + coeff(i, j));
    const double cw = 0.5 * (coeff(i - 1, j) + coeff(i, j));
    const double cn = 0.5 * (coeff(i, j + 1) + coeff(i, j));
    const double cs = 0.5 * (coeff(i, j - 1) + coeff(i, j));
    out(i, j) = cx * (ce * (f(i + 1, j) - f(i, j)) - cw * (f(i, j) - f(i - 1, j))) +
                cy * (cn * (f(i, j + 1) - f(i, j)) - cs * (f(i, j) - f(i, j - 1)));
  });
}

void div_sym_tensor(const Grid& g, const SymTensorField& m, Vec3Field& out, Exec ex) {
  const double cx = 0.5 / g.hx, cy = 0.5 / g.hy;
  for_interior(g, ex, [&](int i, int j) {
    out.x(i, j) = cx * (m.xx(i + 1, j) - m.xx(i - 1, j)) + cy * (m.xy(i, j + 1) - m.xy(i, j - 1));
    out.y(i, j) = cx * (m.xy(i + 1, j) - m.xy(i - 1, j)) + cy * (m.yy(i, j + 1) - m.yy(i, j - 1));
    out.z(i, j) = cx * (m.xz(i + 1, j) - m.xz(i - 1, j)) + cy * (m.yz(i, j + 1) - m.yz(i, j - 1));
  });
}

void outer_product(const Grid& g, const Vec3Field& a, SymTensorField& out, Exec ex) {
  for_all(g, ex, [&](int i, int j) {
    const double ax = a.x(i, j), ay = a.y(i, j), az = a.z(i, j);
    out.xx(i, j) = ax * ax;
    out.xy(i, j) = ax * ay;
    out.xz(i, j) = ax * az;
    out.yy(i, j) = ay * ay;
    out.yz(i, j) = ay * az;
    out.zz(i, j) = az * az;
  });
}

void div_outer(const Grid& g, const Vec3Field& a, Vec3Field& out, Exec ex) {
  SymTensorField m(g);
  outer_product(g, a, m, ex);
  div_sym_tensor(g, m, out, ex);
}

void convect(const Grid& g, const Vec3Field& vel, const Field& f, Field& out, Exec ex) {
  const double cx = 0.5 / g.hx, cy = 0.5 / g.hy;
  for_interior(g, ex, [&](int i, int j) {
    out(i, j) = vel.x(i, j) * cx * (f(i + 1, j) - f(i - 1, j)) +
                vel.y(i, j) * cy * (f(i, j + 1) - f(i, j - 1));
  });
}

void convect_vec(const Grid& g, const Vec3Field& vel, const Vec3Field& v, Vec3Field& out,
                 Exec ex) {
  convect(g, vel, v.x, out.x, ex);
  convect(g, vel, v.y, out.y, ex);
  convect(g, vel, v.z, out.z, ex);
}

void gradv_contract(const Grid& g, const Vec3Field& v, const SymTensorField& m, Field& out,
                    Exec ex) {
  // grad(v)_{dc} = d_d v_c with d in {x, y}; contraction against a symmetric
  // tensor picks up the (x,c) and (y,c) entries only (d/dz = 0).
  const double cx = 0.5 / g.hx, cy = 0.5 / g.hy;
  for_interior(g, ex, [&](int i, int j) {
    const double dxvx = cx * (v.x(i + 1, j) - v.x(i - 1, j));
    const double dxvy = cx * (v.y(i + 1, j) - v.y(i - 1, j));
    const double dxvz = cx * (v.z(i + 1, j) - v.z(i - 1, j));
    const double dyvx = cy * (v.x(i, j + 1) - v.x(i, j - 1));
    const double dyvy = cy * (v.y(i, j + 1) - v.y(i, j - 1));
    const double dyvz = cy * (v.z(i, j + 1) - v.z(i, j - 1));
    out(i, j) = dxvx * m.xx(i, j) + dxvy * m.xy(i, j) + dxvz * m.xz(i, j) +
                dyvx * m.xy(i, j) + dyvy * m.yy(i, j) + dyvz * m.yz(i, j);
  });
}

}  // namespace hegl
