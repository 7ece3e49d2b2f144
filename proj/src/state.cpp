#include "hegl/state.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hegl {

FieldState::FieldState(const Grid& g)
    : grid(g), phi(g), vs(g), phi_s(g), vn(g), p(g), rho(g), theta(g) {
  rho.fill(1.0);
  theta.fill(1.0);
}

void apply_bcs(FieldState& s, const ModelParams& prm) {
  fill_ghosts_scalar(s.grid, s.phi);
  fill_ghosts_scalar(s.grid, s.phi_s);
  fill_ghosts_scalar(s.grid, s.p);
  fill_ghosts_scalar(s.grid, s.rho);
  fill_ghosts_scalar(s.grid, s.theta);
  fill_ghosts_vector(s.grid, s.vs, VecRule::free_normal, prm.omega_bc);
  fill_ghosts_vector(s.grid, s.vn, VecRule::no_slip);
}

void apply_bcs(ComplexState& s, const ModelParams&) {
  fill_ghosts_scalar(s.grid, s.psi_re);
  fill_ghosts_scalar(s.grid, s.psi_im);
  fill_ghosts_scalar(s.grid, s.phi_pot);
  fill_ghosts_scalar(s.grid, s.p);
  fill_ghosts_scalar(s.grid, s.rho);
  fill_ghosts_scalar(s.grid, s.theta);
  fill_ghosts_vector(s.grid, s.A, VecRule::free_normal);
  fill_ghosts_vector(s.grid, s.vn, VecRule::no_slip);
}

ComplexState::ComplexState(const Grid& g)
    : grid(g), psi_re(g), psi_im(g), A(g), phi_pot(g), vn(g), p(g), rho(g), theta(g) {
  rho.fill(1.0);
  theta.fill(1.0);
}

FieldState new_state(const Grid& g, const InitSpec& init, const ModelParams& params) {
  g.validate();
  if (init.kind == InitSpec::Kind::snapshot) {
    FieldState s = read_snapshot(init.snapshot_path, params);
    return s;
  }
  if (!(init.rho > 0.0)) throw std::invalid_argument("rho nonpositive");
  if (!(init.theta > 0.0)) throw std::invalid_argument("theta nonpositive");
  if (g.dim == 1 && (init.vs.y != 0.0 || init.vs.z != 0.0 || init.vn.y != 0.0 ||
                     init.vn.z != 0.0))
    throw std::invalid_argument("transverse velocity components must vanish in 1D");

  FieldState s(g);
  s.phi.fill(init.phi);
  s.vs.fill(init.vs);
  s.vn.fill(init.vn);
  s.p.fill(init.p);
  s.rho.fill(init.rho);
  s.theta.fill(init.theta);

  if (init.kind == InitSpec::Kind::profile) {
    if (init.profile == "tanh-interface") {
      for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i)
          s.phi(i, j) = std::tanh((g.x(i) - 0.5 * g.lx()) / init.profile_width);
    } else if (init.profile == "cosine-bump") {
      const double pi = 3.14159265358979323846;
      for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) {
          double b = init.profile_amp * std::cos(pi * g.x(i) / g.lx());
          if (g.dim == 2) b *= std::cos(pi * g.y(j) / g.ly());
          s.phi(i, j) += b;
        }
    } else {
      throw std::invalid_argument("unknown profile: " + init.profile);
    }
  }

  apply_bcs(s, params);
  const std::string bad = positivity_violation(s);
  if (!bad.empty()) throw std::invalid_argument(bad + " nonpositive");
  return s;
}

std::string positivity_violation(const FieldState& s) {
  for (int j = 1; j <= s.grid.ny; ++j)
    for (int i = 1; i <= s.grid.nx; ++i) {
      if (!(s.rho(i, j) > 0.0)) return "rho";
      if (!(s.theta(i, j) > 0.0)) return "theta";
    }
  return "";
}

void write_snapshot(const FieldState& s, std::ostream& os) {
  char buf[64];
  os << "helium-gl snapshot v1; dim=" << s.grid.dim << "; nx=" << s.grid.nx
     << "; ny=" << s.grid.ny << "; hx=";
  std::snprintf(buf, sizeof buf, "%.17g", s.grid.hx);
  os << buf << "; hy=";
  std::snprintf(buf, sizeof buf, "%.17g", s.grid.hy);
  os << buf << "\n";
  for (int j = 1; j <= s.grid.ny; ++j)
    for (int i = 1; i <= s.grid.nx; ++i) {
      os << (i - 1) << ',' << (j - 1);
      const double cols[] = {s.phi(i, j), s.vs.x(i, j), s.vs.y(i, j),   s.vs.z(i, j),
                             s.phi_s(i, j), s.vn.x(i, j), s.vn.y(i, j), s.vn.z(i, j),
                             s.p(i, j),    s.rho(i, j),  s.theta(i, j)};
      for (double c : cols) {
        std::snprintf(buf, sizeof buf, "%.17g", c);
        os << ',' << buf;
      }
      os << "\n";
    }
}

void write_snapshot(const FieldState& s, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open snapshot for writing: " + path);
  write_snapshot(s, os);
}

FieldState read_snapshot(std::istream& is, const ModelParams& params) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("snapshot: empty file");
  int dim = 0, nx = 0, ny = 0;
  double hx = 0, hy = 0;
  if (std::sscanf(header.c_str(), "helium-gl snapshot v1; dim=%d; nx=%d; ny=%d; hx=%lg; hy=%lg",
                  &dim, &nx, &ny, &hx, &hy) != 5)
    throw std::runtime_error("snapshot: bad header: " + header);
  Grid g = (dim == 2) ? Grid::make_2d(nx, ny, hx, hy) : Grid::make_1d(nx, hx);
  FieldState s(g);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    int ix, iy;
    double v[11];
    if (std::sscanf(line.c_str(),
                    "%d,%d,%lg,%lg,%lg,%lg,%lg,%lg,%lg,%lg,%lg,%lg,%lg", &ix, &iy, &v[0],
                    &v[1], &v[2], &v[3], &v[4], &v[5], &v[6], &v[7], &v[8], &v[9],
                    &v[10]) != 13)
      throw std::runtime_error("snapshot: bad row: " + line);
    if (ix < 0 || ix >= nx || iy < 0 || iy >= ny)
      throw std::runtime_error("snapshot: cell index out of range");
    const int i = ix + 1, j = iy + 1;
    s.phi(i, j) = v[0];
    s.vs.x(i, j) = v[1];
    s.vs.y(i, j) = v[2];
    s.vs.z(i, j) = v[3];
    s.phi_s(i, j) = v[4];
    s.vn.x(i, j) = v[5];
    s.vn.y(i, j) = v[6];
    s.vn.z(i, j) = v[7];
    s.p(i, j) = v[8];
    s.rho(i, j) = v[9];
    s.theta(i, j) = v[10];
    ++rows;
  }
  if (rows != std::size_t(nx) * std::size_t(ny))
    throw std::runtime_error("snapshot: wrong number of rows");
  apply_bcs(s, params);
  const std::string bad = positivity_violation(s);
  if (!bad.empty()) throw std::runtime_error("snapshot: " + bad + " nonpositive");
  return s;
}

FieldState read_snapshot(const std::string& path, const ModelParams& params) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open snapshot: " + path);
  return read_snapshot(is, params);
}

}  // namespace hegl
