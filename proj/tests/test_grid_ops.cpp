#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "hegl/ops.hpp"

using namespace hegl;

namespace {
constexpr double kPi = 3.14159265358979323846;

// sample an analytic function at every cell including ghosts
template <class F>
Field sample(const Grid& g, F&& f) {
  Field out(g);
  for (int j = 0; j < g.nyg(); ++j)
    for (int i = 0; i < g.nxg(); ++i) out(i, j) = f(g.x(i), g.y(j));
  return out;
}

template <class FX, class FY, class FZ>
Vec3Field sample_vec(const Grid& g, FX&& fx, FY&& fy, FZ&& fz) {
  Vec3Field v(g);
  v.x = sample(g, fx);
  v.y = sample(g, fy);
  v.z = sample(g, fz);
  return v;
}
}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS(Grid::make_1d(3, 0.1));
  CHECK_THROWS(Grid::make_1d(8, -1.0));
  CHECK_THROWS(Grid::make_2d(8, 3, 0.1, 0.1));
  const Grid g = Grid::make_2d(8, 8, 0.5, 0.25);
  CHECK(g.cell_volume() == doctest::Approx(0.125));
}

TEST_CASE("grad: constants and affine fields") {
  const Grid g = Grid::make_2d(8, 8, 0.3, 0.2);
  Field c = sample(g, [](double, double) { return 2.5; });
  Vec3Field out(g);
  grad(g, c, out, Exec::serial);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      CHECK(out.x(i, j) == 0.0);
      CHECK(out.y(i, j) == 0.0);
    }
  Field lin = sample(g, [](double x, double) { return x; });
  grad(g, lin, out, Exec::serial);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      CHECK(out.x(i, j) == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(out.y(i, j) == doctest::Approx(0.0).epsilon(1e-13));
    }
}

TEST_CASE("grad: second-order convergence on sin") {
  auto err = [](int n) {
    const Grid g = Grid::make_1d(n, 2.0 * kPi / n);
    Field f = sample(g, [](double x, double) { return std::sin(x); });
    Vec3Field out(g);
    grad(g, f, out, Exec::serial);
    double m = 0.0;
    for (int i = 2; i <= g.nx - 1; ++i)
      m = std::max(m, std::fabs(out.x(i, 1) - std::cos(g.x(i))));
    return m;
  };
  const double ratio = err(32) / err(64);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("div(grad(x^2)) equals lap(x^2) equals 2") {
  const Grid g = Grid::make_1d(16, 0.1);
  Field f = sample(g, [](double x, double) { return x * x; });
  Field l(g);
  lap(g, f, l, Exec::serial);
  Vec3Field gf(g);
  grad(g, f, gf, Exec::serial);
  // interior of grad(x^2) is exact; extend by sampling the exact gradient
  Vec3Field gfs = sample_vec(g, [](double x, double) { return 2.0 * x; },
                             [](double, double) { return 0.0; },
                             [](double, double) { return 0.0; });
  Field d(g);
  div(g, gfs, d, Exec::serial);
  for (int i = 3; i <= g.nx - 2; ++i) {
    CHECK(l(i, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d(i, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(gf.x(i, 1) == doctest::Approx(2.0 * g.x(i)).epsilon(1e-12));
  }
}

TEST_CASE("div(curl v) vanishes identically on the composite-valid region") {
  const Grid g = Grid::make_2d(24, 24, 2 * kPi / 24, 2 * kPi / 24);
  Vec3Field v = sample_vec(g,
                           [](double x, double y) { return std::sin(x) * std::cos(2 * y); },
                           [](double x, double y) { return std::cos(x + y); },
                           [](double x, double y) { return std::sin(2 * x) * std::sin(y); });
  Vec3Field c(g);
  curl(g, v, c, Exec::serial);
  Field d(g);
  div(g, c, d, Exec::serial);
  for (int j = 3; j <= g.ny - 2; ++j)
    for (int i = 3; i <= g.nx - 2; ++i) CHECK(std::fabs(d(i, j)) <= 1e-12);
}

TEST_CASE("curl is identically zero in 1D") {
  const Grid g = Grid::make_1d(16, 0.1);
  Field vx = sample(g, [](double x, double) { return std::sin(3 * x); });
  Vec3Field v(g);
  v.x = vx;
  fill_ghosts_vector(g, v, VecRule::free_normal);
  Vec3Field c(g);
  curl(g, v, c, Exec::serial);
  for (int i = 1; i <= g.nx; ++i) {
    CHECK(c.x(i, 1) == 0.0);
    CHECK(c.y(i, 1) == 0.0);
    CHECK(c.z(i, 1) == 0.0);
  }
}

TEST_CASE("div_coeff_grad: constant coefficient reduces to lap") {
  const Grid g = Grid::make_2d(12, 10, 0.15, 0.2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  Field f(g), one(g);
  for (int j = 0; j < g.nyg(); ++j)
    for (int i = 0; i < g.nxg(); ++i) {
      f(i, j) = u(rng);
      one(i, j) = 1.0;
    }
  Field a(g), b(g);
  div_coeff_grad(g, one, f, a, Exec::serial);
  lap(g, f, b, Exec::serial);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) CHECK(a(i, j) == doctest::Approx(b(i, j)).epsilon(1e-13));
}

TEST_CASE("div_coeff_grad: constant field gives zero") {
  const Grid g = Grid::make_1d(8, 0.1);
  Field f = sample(g, [](double, double) { return 3.7; });
  Field rho = sample(g, [](double x, double) { return 1.0 + x; });
  Field out(g);
  div_coeff_grad(g, rho, f, out, Exec::serial);
  for (int i = 1; i <= g.nx; ++i) CHECK(out(i, 1) == 0.0);
}

TEST_CASE("div_coeff_grad: analytic flux derivative, second order") {
  // rho = 1 + x, phi = x^2: d/dx((1+x) 2x) = 2 + 4x
  auto err = [](int n) {
    const Grid g = Grid::make_1d(n, 1.0 / n);
    Field rho = sample(g, [](double x, double) { return 1.0 + x; });
    Field f = sample(g, [](double x, double) { return x * x; });
    Field out(g);
    div_coeff_grad(g, rho, f, out, Exec::serial);
    double m = 0.0;
    for (int i = 2; i <= g.nx - 1; ++i)
      m = std::max(m, std::fabs(out(i, 1) - (2.0 + 4.0 * g.x(i))));
    return m;
  };
  // flux form with arithmetic face means is exact for this quadratic in 1D
  CHECK(err(32) <= 1e-12);
}

TEST_CASE("div_outer: constants and linear fields") {
  const Grid g = Grid::make_1d(16, 0.05);
  Vec3Field c = sample_vec(g, [](double, double) { return 1.3; },
                           [](double, double) { return -0.4; },
                           [](double, double) { return 0.8; });
  Vec3Field out(g);
  div_outer(g, c, out, Exec::serial);
  for (int i = 1; i <= g.nx; ++i) {
    CHECK(out.x(i, 1) == 0.0);
    CHECK(out.y(i, 1) == 0.0);
    CHECK(out.z(i, 1) == 0.0);
  }
  // a = (x, 0, 0): div(a x a) = (2x, 0, 0)
  Vec3Field ax = sample_vec(g, [](double x, double) { return x; },
                            [](double, double) { return 0.0; },
                            [](double, double) { return 0.0; });
  div_outer(g, ax, out, Exec::serial);
  for (int i = 2; i <= g.nx - 1; ++i)
    CHECK(out.x(i, 1) == doctest::Approx(2.0 * g.x(i)).epsilon(1e-12));
}

TEST_CASE("div_outer: even in the sign of a") {
  const Grid g = Grid::make_2d(10, 8, 0.1, 0.1);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  Vec3Field a(g), na(g);
  for (int j = 0; j < g.nyg(); ++j)
    for (int i = 0; i < g.nxg(); ++i) {
      a.x(i, j) = u(rng);
      a.y(i, j) = u(rng);
      a.z(i, j) = u(rng);
      na.x(i, j) = -a.x(i, j);
      na.y(i, j) = -a.y(i, j);
      na.z(i, j) = -a.z(i, j);
    }
  Vec3Field r1(g), r2(g);
  div_outer(g, a, r1, Exec::serial);
  div_outer(g, na, r2, Exec::serial);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      CHECK(r1.x(i, j) == r2.x(i, j));
      CHECK(r1.y(i, j) == r2.y(i, j));
    }
}

TEST_CASE("operators are linear") {
  const Grid g = Grid::make_2d(12, 12, 0.1, 0.12);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  Field a(g), b(g), combo(g);
  for (int j = 0; j < g.nyg(); ++j)
    for (int i = 0; i < g.nxg(); ++i) {
      a(i, j) = u(rng);
      b(i, j) = u(rng);
      combo(i, j) = 1.7 * a(i, j) - 0.6 * b(i, j);
    }
  Field la(g), lb(g), lc(g);
  lap(g, a, la, Exec::serial);
  lap(g, b, lb, Exec::serial);
  lap(g, combo, lc, Exec::serial);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i)
      CHECK(lc(i, j) == doctest::Approx(1.7 * la(i, j) - 0.6 * lb(i, j)).epsilon(1e-11));
}

TEST_CASE("summation by parts with vanishing normal trace") {
  const Grid g = Grid::make_2d(20, 16, 0.09, 0.11);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  Field f(g);
  Vec3Field v(g);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      f(i, j) = u(rng);
      v.x(i, j) = u(rng);
      v.y(i, j) = u(rng);
    }
  fill_ghosts_scalar(g, f);
  fill_ghosts_vector(g, v, VecRule::free_normal);
  Field dv(g);
  Vec3Field gf(g);
  div(g, v, dv, Exec::serial);
  grad(g, f, gf, Exec::serial);
  double s = 0.0;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i)
      s += (f(i, j) * dv(i, j) + gf.x(i, j) * v.x(i, j) + gf.y(i, j) * v.y(i, j)) *
           g.cell_volume();
  CHECK(std::fabs(s) <= 1e-10);
}

TEST_CASE("ghost fill rules are idempotent and enforce the traces") {
  const Grid g = Grid::make_2d(8, 8, 0.2, 0.2);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  Field f(g);
  Vec3Field vs(g), vn(g);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      f(i, j) = u(rng);
      vs.x(i, j) = u(rng);
      vs.y(i, j) = u(rng);
      vn.x(i, j) = u(rng);
      vn.y(i, j) = u(rng);
    }
  fill_ghosts_scalar(g, f);
  Field f2 = f;
  fill_ghosts_scalar(g, f2);
  CHECK(f2.a == f.a);

  const Vec3 omega{0.0, 0.3, -0.2};
  fill_ghosts_vector(g, vs, VecRule::free_normal, omega);
  fill_ghosts_vector(g, vn, VecRule::no_slip);
  for (int j = 1; j <= g.ny; ++j) {
    // scalar Neumann: zero normal difference
    CHECK(f(0, j) == f(1, j));
    // v_s normal trace zero, tangential datum applied
    CHECK(vs.x(0, j) + vs.x(1, j) == 0.0);
    CHECK(vs.y(0, j) - vs.y(1, j) == doctest::Approx(g.hx * omega.y));
    // no slip: all components vanish at the face
    CHECK(vn.x(0, j) + vn.x(1, j) == 0.0);
    CHECK(vn.y(0, j) + vn.y(1, j) == 0.0);
  }
}
