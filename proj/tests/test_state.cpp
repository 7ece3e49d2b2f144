#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hegl/check.hpp"
#include "hegl/state.hpp"

using namespace hegl;

TEST_CASE("uniform state satisfies invariants and discrete boundary conditions") {
  const Grid g = Grid::make_2d(8, 8, 0.1, 0.1);
  ModelParams prm;
  InitSpec init;
  init.phi = 0.0;
  init.theta = 2.5;
  init.rho = 1.0;
  FieldState s = new_state(g, init, prm);
  // ghost reflection makes the traces identities
  for (int j = 1; j <= g.ny; ++j) {
    CHECK(s.phi(0, j) == s.phi(1, j));                // grad phi . n = 0
    CHECK(s.theta(g.nx + 1, j) == s.theta(g.nx, j));  // grad theta . n = 0
    CHECK(s.vs.x(0, j) + s.vs.x(1, j) == 0.0);        // v_s . n = 0
    CHECK(s.vn.x(0, j) + s.vn.x(1, j) == 0.0);        // v_n = 0
    CHECK(s.vn.y(0, j) + s.vn.y(1, j) == 0.0);
  }
  for (int i = 0; i <= g.nx + 1; ++i) {
    CHECK(s.phi(i, 0) == s.phi(i, 1));
    CHECK(s.vn.y(i, 0) + s.vn.y(i, 1) == 0.0);
    CHECK(s.vs.y(i, 0) + s.vs.y(i, 1) == 0.0);
  }
}

TEST_CASE("initializer rejections name the field") {
  const Grid g = Grid::make_1d(8, 0.1);
  ModelParams prm;
  InitSpec init;
  init.rho = -1.0;
  CHECK_THROWS_WITH_AS(new_state(g, init, prm), "rho nonpositive", std::invalid_argument);
  init.rho = 1.0;
  init.theta = 0.0;
  CHECK_THROWS_WITH_AS(new_state(g, init, prm), "theta nonpositive", std::invalid_argument);
  init.theta = 2.0;
  init.vs = {0.0, 0.3, 0.0};
  CHECK_THROWS_AS(new_state(g, init, prm), std::invalid_argument);
}

TEST_CASE("tanh interface profile keeps the Neumann stencil exact") {
  const Grid g = Grid::make_1d(64, 1.0 / 64);
  ModelParams prm;
  InitSpec init;
  init.kind = InitSpec::Kind::profile;
  init.profile = "tanh-interface";
  init.profile_width = 0.1;
  init.theta = 2.0;
  FieldState s = new_state(g, init, prm);
  CHECK(s.phi(1, 1) == doctest::Approx(std::tanh((g.x(1) - 0.5) / 0.1)));
  // discrete normal derivative at both walls is identically zero
  CHECK(s.phi(0, 1) - s.phi(1, 1) == 0.0);
  CHECK(s.phi(g.nx + 1, 1) - s.phi(g.nx, 1) == 0.0);

  InitSpec bad = init;
  bad.profile = "no-such-profile";
  CHECK_THROWS(new_state(g, bad, prm));
}

TEST_CASE("snapshot round-trip is bit exact") {
  const Grid g = Grid::make_2d(6, 5, 0.37, 0.21);
  ModelParams prm;
  FieldState s = random_smooth_state(g, 123, prm, 0.4);
  s.phi(3, 2) = 1.0 / 3.0;  // exercise non-terminating decimals
  s.theta(2, 2) = 2.1700000000000004;
  apply_bcs(s, prm);

  std::stringstream ss;
  write_snapshot(s, ss);
  FieldState r = read_snapshot(ss, prm);
  CHECK(r.grid.nx == g.nx);
  CHECK(r.grid.hy == g.hy);
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      CHECK(r.phi(i, j) == s.phi(i, j));
      CHECK(r.vs.x(i, j) == s.vs.x(i, j));
      CHECK(r.vs.y(i, j) == s.vs.y(i, j));
      CHECK(r.phi_s(i, j) == s.phi_s(i, j));
      CHECK(r.vn.x(i, j) == s.vn.x(i, j));
      CHECK(r.p(i, j) == s.p(i, j));
      CHECK(r.rho(i, j) == s.rho(i, j));
      CHECK(r.theta(i, j) == s.theta(i, j));
    }
}

TEST_CASE("snapshot rejects malformed input") {
  ModelParams prm;
  {
    std::stringstream ss("garbage header\n");
    CHECK_THROWS(read_snapshot(ss, prm));
  }
  {
    std::stringstream ss(
        "helium-gl snapshot v1; dim=1; nx=4; ny=1; hx=0.25; hy=1\n"
        "0,0,0,0,0,0,0,0,0,0,0,1,2\n");  // wrong row count
    CHECK_THROWS(read_snapshot(ss, prm));
  }
  {
    // rho <= 0 in the payload
    std::stringstream ss(
        "helium-gl snapshot v1; dim=1; nx=4; ny=1; hx=0.25; hy=1\n"
        "0,0,0,0,0,0,0,0,0,0,0,-1,2\n"
        "1,0,0,0,0,0,0,0,0,0,0,1,2\n"
        "2,0,0,0,0,0,0,0,0,0,0,1,2\n"
        "3,0,0,0,0,0,0,0,0,0,0,1,2\n");
    CHECK_THROWS(read_snapshot(ss, prm));
  }
}

TEST_CASE("positivity violations are detected") {
  const Grid g = Grid::make_1d(8, 0.1);
  ModelParams prm;
  InitSpec init;
  FieldState s = new_state(g, init, prm);
  CHECK(positivity_violation(s).empty());
  s.theta(4, 1) = -0.2;
  CHECK(positivity_violation(s) == "theta");
  s.theta(4, 1) = 2.0;
  s.rho(2, 1) = 0.0;
  CHECK(positivity_violation(s) == "rho");
}
