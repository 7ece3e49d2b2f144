#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "hegl/params.hpp"

namespace hegl {

// Unknowns of the real formulation, cell-centered with ghost frames.
// Ghost rules: phi, phi_s, p, rho, theta even reflection; v_s free-normal
// with the omega datum on the tangential components; v_n no-slip.
struct FieldState {
  Grid grid;
  double t = 0.0;
  Field phi;    // order parameter; phi^2 is the superfluid concentration
  Vec3Field vs; // superfluid velocity component
  Field phi_s;  // superfluid pressure (algebraic)
  Vec3Field vn; // normal velocity component
  Field p;      // pressure, mean pinned to zero
  Field rho;    // mass density, > 0
  Field theta;  // absolute temperature, > 0

  FieldState() = default;
  explicit FieldState(const Grid& g);
};

// Re-impose every ghost rule (with the omega datum for v_s).
void apply_bcs(FieldState& s, const ModelParams& p);

// Initializer spec: uniform values, a named analytic profile, or a snapshot.
struct InitSpec {
  enum class Kind { uniform, profile, snapshot } kind = Kind::uniform;
  // uniform values
  double phi = 0.0;
  Vec3 vs{};
  Vec3 vn{};
  double p = 0.0;
  double rho = 1.0;
  double theta = 2.5;
  // profile: named analytic shapes layered on top of the uniform values
  //   "tanh-interface"  phi = tanh((x - lx/2) / width)
  //   "cosine-bump"     phi += amp * cos(pi x / lx) [cos(pi y / ly)]
  std::string profile;
  double profile_amp = 0.1;
  double profile_width = 0.5;
  // snapshot path
  std::string snapshot_path;
};

// Build a state satisfying all invariants and boundary rules.
// Throws std::invalid_argument naming the offending field for nonpositive
// rho/theta or nonzero transverse velocity components in 1D.
FieldState new_state(const Grid& g, const InitSpec& init, const ModelParams& params);

// Positivity guards; return the offending field name or empty string.
std::string positivity_violation(const FieldState& s);

// Snapshot file: header
//   helium-gl snapshot v1; dim=<d>; nx=<nx>; ny=<ny>; hx=<hx>; hy=<hy>
// then one CSV row per interior cell:
//   ix,iy,phi,vsx,vsy,vsz,phis,vnx,vny,vnz,p,rho,theta
// written in full round-trip precision.
void write_snapshot(const FieldState& s, const std::string& path);
FieldState read_snapshot(const std::string& path, const ModelParams& params);
void write_snapshot(const FieldState& s, std::ostream& os);
FieldState read_snapshot(std::istream& is, const ModelParams& params);

// Gauge-transformed unknowns: psi = phi e^{i chi} stored as re/im pair,
// A = v_s + grad(chi)/kappa, phi_pot = phi_s - chi_dot/kappa; v_n, p, rho,
// theta are shared with the real formulation.
struct ComplexState {
  Grid grid;
  double t = 0.0;
  Field psi_re, psi_im;
  Vec3Field A;
  Field phi_pot;
  Vec3Field vn;
  Field p;
  Field rho;
  Field theta;

  ComplexState() = default;
  explicit ComplexState(const Grid& g);
};

// psi re/im even reflection (|psi| inherits phi's Neumann rule), A inherits
// v_s's rules with zero datum, the shared fields their usual rules.
void apply_bcs(ComplexState& s, const ModelParams& p);

}  // namespace hegl
