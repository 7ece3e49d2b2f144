#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "hegl/ops.hpp"
#include "hegl/poisson.hpp"

using namespace hegl;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("poisson_neumann: zero rhs gives zero") {
  const Grid g = Grid::make_1d(32, 1.0 / 32);
  Field rhs(g), u(g);
  const SolveReport rep = poisson_neumann(g, rhs, u, 1e-12, 1000);
  CHECK(rep.converged);
  CHECK(rep.iterations == 0);
  for (int i = 1; i <= g.nx; ++i) CHECK(u(i, 1) == 0.0);
}

TEST_CASE("poisson_neumann: manufactured Neumann solution") {
  // f = cos(pi x / L): grad f . n = 0 at both walls
  const Grid g = Grid::make_1d(64, 1.0 / 64);
  Field f(g);
  for (int j = 0; j < g.nyg(); ++j)
    for (int i = 0; i < g.nxg(); ++i) f(i, j) = std::cos(kPi * g.x(i) / g.lx());
  Field rhs(g);
  Field fc = f;
  apply_lap_neumann(g, fc, rhs, Exec::serial);

  Field u(g);
  const double tol = 1e-11;
  const SolveReport rep = poisson_neumann(g, rhs, u, tol, 10000);
  CHECK(rep.converged);
  const double fmean = interior_mean(g, f);
  double m = 0.0;
  for (int i = 1; i <= g.nx; ++i) m = std::max(m, std::fabs(u(i, 1) - (f(i, 1) - fmean)));
  CHECK(m <= 1e-7);  // conditioning of the Neumann problem amplifies tol
  CHECK(std::fabs(interior_mean(g, u)) <= 1e-12);
}

TEST_CASE("poisson_neumann: incompatible rhs is mean-corrected") {
  const Grid g = Grid::make_1d(32, 1.0 / 32);
  Field rhs(g);
  for (int i = 1; i <= g.nx; ++i) rhs(i, 1) = 1.0 + 0.3 * std::sin(2 * kPi * g.x(i));
  Field u(g);
  const SolveReport rep = poisson_neumann(g, rhs, u, 1e-10, 5000);
  CHECK(rep.converged);
  CHECK(rep.rhs_mean_removed == doctest::Approx(1.0).epsilon(1e-10));
  // residual against the corrected rhs
  Field uc = u, au(g);
  apply_lap_neumann(g, uc, au, Exec::serial);
  double m = 0.0;
  for (int i = 1; i <= g.nx; ++i)
    m = std::max(m, std::fabs(au(i, 1) - (rhs(i, 1) - rep.rhs_mean_removed)));
  CHECK(m <= 1e-10);
}

TEST_CASE("poisson_neumann: non-convergence is reported") {
  const Grid g = Grid::make_2d(32, 32, 1.0 / 32, 1.0 / 32);
  Field rhs(g), u(g);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(-1, 1);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) rhs(i, j) = dist(rng);
  const SolveReport rep = poisson_neumann(g, rhs, u, 1e-14, 2);
  CHECK(!rep.converged);
  CHECK(rep.residual_inf > 1e-14);
}

TEST_CASE("wide operator is symmetric (matrix assembly)") {
  auto assemble_and_check = [](const Grid& g, bool with_coeff) {
    const int n = g.nx * g.ny;
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    Field coeff(g);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) coeff(i, j) = with_coeff ? u(rng) : 1.0;
    fill_ghosts_scalar(g, coeff);
    for (int col = 0; col < n; ++col) {
      Field p(g), out(g);
      p(1 + col % g.nx, 1 + col / g.nx) = 1.0;
      apply_div_coeff_grad_wide(g, &coeff, p, out, Exec::serial);
      for (int row = 0; row < n; ++row)
        A[row][col] = out(1 + row % g.nx, 1 + row / g.nx);
    }
    double asym = 0.0, rowsum = 0.0;
    for (int r = 0; r < n; ++r) {
      double s = 0.0;
      for (int c = 0; c < n; ++c) {
        asym = std::max(asym, std::fabs(A[r][c] - A[c][r]));
        s += A[r][c];
      }
      rowsum = std::max(rowsum, std::fabs(s));
    }
    CHECK(asym <= 1e-12);
    CHECK(rowsum <= 1e-10);  // constants in the null space
  };
  assemble_and_check(Grid::make_1d(6, 0.2), false);
  assemble_and_check(Grid::make_2d(5, 4, 0.3, 0.25), true);
}

TEST_CASE("wide-operator solve reaches the requested residual") {
  const Grid g = Grid::make_2d(24, 24, 1.0 / 24, 1.0 / 24);
  Field coeff(g), rhs(g), q(g);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> uc(0.5, 2.0), ur(-1, 1);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      coeff(i, j) = uc(rng);
      rhs(i, j) = ur(rng);
    }
  fill_ghosts_scalar(g, coeff);
  LinOp op = [&](Field& p, Field& out) {
    apply_div_coeff_grad_wide(g, &coeff, p, out, Exec::serial);
  };
  const SolveReport rep = cg_neumann(g, op, rhs, q, 1e-9, 100000);
  CHECK(rep.converged);
  CHECK(rep.residual_inf <= 1e-9);
}
