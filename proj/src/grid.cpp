#include "hegl/grid.hpp"

#include <algorithm>
#include <cmath>

namespace hegl {

namespace {
Exec g_default_exec = Exec::omp;
}

Exec default_exec() { return g_default_exec; }
void set_default_exec(Exec e) { g_default_exec = e; }

Grid Grid::make_1d(int nx, double hx) {
  Grid g;
  g.dim = 1;
  g.nx = nx;
  g.ny = 1;
  g.hx = hx;
  g.hy = 1.0;
  g.validate();
  return g;
}

Grid Grid::make_2d(int nx, int ny, double hx, double hy) {
  Grid g;
  g.dim = 2;
  g.nx = nx;
  g.ny = ny;
  g.hx = hx;
  g.hy = hy;
  g.validate();
  return g;
}

void Grid::validate() const {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid: dim must be 1 or 2");
  if (nx < 4) throw std::invalid_argument("grid: nx must be >= 4");
  if (dim == 2 && ny < 4) throw std::invalid_argument("grid: ny must be >= 4 in 2D");
  if (dim == 1 && ny != 1) throw std::invalid_argument("grid: ny must be 1 in 1D");
  if (!(hx > 0.0) || !(hy > 0.0)) throw std::invalid_argument("grid: spacings must be positive");
}

void fill_ghosts_scalar(const Grid& g, Field& f) {
  const int nx = g.nx, ny = g.ny;
  for (int j = 1; j <= ny; ++j) {
    f(0, j) = f(1, j);
    f(nx + 1, j) = f(nx, j);
  }
  if (g.dim == 2) {
    for (int i = 0; i <= nx + 1; ++i) {
      f(i, 0) = f(i, 1);
      f(i, ny + 1) = f(i, ny);
    }
  } else {
    for (int i = 0; i <= nx + 1; ++i) {
      f(i, 0) = f(i, 1);
      f(i, 2) = f(i, 1);
    }
  }
}

void fill_ghosts_vector(const Grid& g, Vec3Field& v, VecRule rule, Vec3 omega) {
  const int nx = g.nx, ny = g.ny;
  const bool slip = (rule == VecRule::free_normal);
  // x faces: normal component is x
  for (int j = 1; j <= ny; ++j) {
    v.x(0, j) = -v.x(1, j);
    v.x(nx + 1, j) = -v.x(nx, j);
    if (slip) {
      v.y(0, j) = v.y(1, j) + g.hx * omega.y;
      v.y(nx + 1, j) = v.y(nx, j) + g.hx * omega.y;
      v.z(0, j) = v.z(1, j) + g.hx * omega.z;
      v.z(nx + 1, j) = v.z(nx, j) + g.hx * omega.z;
    } else {
      v.y(0, j) = -v.y(1, j);
      v.y(nx + 1, j) = -v.y(nx, j);
      v.z(0, j) = -v.z(1, j);
      v.z(nx + 1, j) = -v.z(nx, j);
    }
  }
  if (g.dim == 2) {
    // y faces: normal component is y
    for (int i = 0; i <= nx + 1; ++i) {
      v.y(i, 0) = -v.y(i, 1);
      v.y(i, ny + 1) = -v.y(i, ny);
      if (slip) {
        v.x(i, 0) = v.x(i, 1) + g.hy * omega.x;
        v.x(i, ny + 1) = v.x(i, ny) + g.hy * omega.x;
        v.z(i, 0) = v.z(i, 1) + g.hy * omega.z;
        v.z(i, ny + 1) = v.z(i, ny) + g.hy * omega.z;
      } else {
        v.x(i, 0) = -v.x(i, 1);
        v.x(i, ny + 1) = -v.x(i, ny);
        v.z(i, 0) = -v.z(i, 1);
        v.z(i, ny + 1) = -v.z(i, ny);
      }
    }
  } else {
    // no physical y boundary in 1D: copy so y differences vanish
    for (int i = 0; i <= nx + 1; ++i) {
      v.x(i, 0) = v.x(i, 1);
      v.x(i, 2) = v.x(i, 1);
      v.y(i, 0) = v.y(i, 1);
      v.y(i, 2) = v.y(i, 1);
      v.z(i, 0) = v.z(i, 1);
      v.z(i, 2) = v.z(i, 1);
    }
  }
}

double integral(const Grid& g, const Field& f) {
  double s = 0.0;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) s += f(i, j);
  return s * g.cell_volume();
}

double interior_min(const Grid& g, const Field& f) {
  double m = f(1, 1);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) m = std::min(m, f(i, j));
  return m;
}

double interior_max(const Grid& g, const Field& f) {
  double m = f(1, 1);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) m = std::max(m, f(i, j));
  return m;
}

double interior_max_abs(const Grid& g, const Field& f) {
  double m = 0.0;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) m = std::max(m, std::fabs(f(i, j)));
  return m;
}

double interior_mean(const Grid& g, const Field& f) {
  double s = 0.0;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) s += f(i, j);
  return s / (double(g.nx) * double(g.ny));
}

double interior_max_abs(const Grid& g, const Vec3Field& v) {
  double m = 0.0;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      m = std::max(m, std::fabs(v.x(i, j)));
      m = std::max(m, std::fabs(v.y(i, j)));
      m = std::max(m, std::fabs(v.z(i, j)));
    }
  return m;
}

}  // namespace hegl
