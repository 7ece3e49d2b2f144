#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hegl {

// Execution policy for cell sweeps. `omp` parallelizes interior loops over
// rows; `serial` is the reference path kept for testing and benchmarking.
// Sweeps write disjoint cells, so both policies produce bitwise-identical
// fields. Reductions are always serial with a fixed order.
enum class Exec { serial, omp };

Exec default_exec();
void set_default_exec(Exec e);

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm2(Vec3 a) { return dot(a, a); }

// Rectangular cell-centered lattice with one ghost layer per side.
// 1D mode: fields vary in x only, ny = 1, the y ghost fill is a plain copy
// so every y difference vanishes identically.
// 2D-slab mode: fields vary in (x, y), vectors keep all three components
// with d/dz = 0, so curl terms are the full 3D formulas.
struct Grid {
  int dim = 1;
  int nx = 0;
  int ny = 1;
  double hx = 1.0;
  double hy = 1.0;

  static Grid make_1d(int nx, double hx);
  static Grid make_2d(int nx, int ny, double hx, double hy);

  int nxg() const { return nx + 2; }
  int nyg() const { return ny + 2; }
  std::size_t cells() const { return std::size_t(nxg()) * std::size_t(nyg()); }
  double lx() const { return nx * hx; }
  double ly() const { return ny * hy; }
  // cell-center coordinates; interior cells are i in [1, nx], j in [1, ny]
  double x(int i) const { return (i - 0.5) * hx; }
  double y(int j) const { return (j - 0.5) * hy; }
  double cell_volume() const { return dim == 2 ? hx * hy : hx; }

  // throws std::invalid_argument on malformed grids (nx < 4, spacing <= 0, ...)
  void validate() const;
};

// Scalar field including the ghost frame. Storage is row-major over
// (nx+2) x (ny+2); index (i, j) with the interior at 1..nx, 1..ny.
struct Field {
  int nxg = 0, nyg = 0;
  std::vector<double> a;

  Field() = default;
  explicit Field(const Grid& g)
      : nxg(g.nxg()), nyg(g.nyg()), a(std::size_t(g.nxg()) * g.nyg(), 0.0) {}

  double& operator()(int i, int j) { return a[std::size_t(j) * nxg + i]; }
  double operator()(int i, int j) const { return a[std::size_t(j) * nxg + i]; }
  void fill(double v) { a.assign(a.size(), v); }
};

// Three-component vector field (z component retained in all modes).
struct Vec3Field {
  Field x, y, z;

  Vec3Field() = default;
  explicit Vec3Field(const Grid& g) : x(g), y(g), z(g) {}

  Vec3 at(int i, int j) const { return {x(i, j), y(i, j), z(i, j)}; }
  void set(int i, int j, Vec3 v) {
    x(i, j) = v.x;
    y(i, j) = v.y;
    z(i, j) = v.z;
  }
  void fill(Vec3 v) {
    x.fill(v.x);
    y.fill(v.y);
    z.fill(v.z);
  }
};

// Symmetric rank-2 tensor field (xx, xy, xz, yy, yz, zz).
struct SymTensorField {
  Field xx, xy, xz, yy, yz, zz;
  SymTensorField() = default;
  explicit SymTensorField(const Grid& g) : xx(g), xy(g), xz(g), yy(g), yz(g), zz(g) {}
};

// Ghost-fill rules. Scalars obeying a zero-normal-gradient condition use
// even reflection. Vectors come in two flavors:
//   no_slip      all components odd (zero boundary trace), used for v_n
//   free_normal  normal component odd (zero normal trace), tangential
//                components even plus the optional curl datum
//                ghost_t = interior_t + h * omega_t, which realizes
//                (curl v) x n = omega at the face
enum class VecRule { no_slip, free_normal };

void fill_ghosts_scalar(const Grid& g, Field& f);
void fill_ghosts_vector(const Grid& g, Vec3Field& v, VecRule rule, Vec3 omega = {});

// Serial fixed-order reductions over the interior.
double integral(const Grid& g, const Field& f);
double interior_min(const Grid& g, const Field& f);
double interior_max(const Grid& g, const Field& f);
double interior_max_abs(const Grid& g, const Field& f);
double interior_mean(const Grid& g, const Field& f);
double interior_max_abs(const Grid& g, const Vec3Field& v);

// Interior sweep helper honoring the execution policy.
template <class F>
inline void for_interior(const Grid& g, Exec ex, F&& f) {
  if (ex == Exec::omp) {
#pragma omp parallel for schedule(static)
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) f(i, j);
  } else {
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) f(i, j);
  }
}

// Sweep over every cell including ghosts (used to assemble pointwise
// compound fields from ghost-filled factors).
template <class F>
inline void for_all(const Grid& g, Exec ex, F&& f) {
  const int nyg = g.nyg(), nxg = g.nxg();
  if (ex == Exec::omp) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < nyg; ++j)
      for (int i = 0; i < nxg; ++i) f(i, j);
  } else {
    for (int j = 0; j < nyg; ++j)
      for (int i = 0; i < nxg; ++i) f(i, j);
  }
}

}  // namespace hegl
