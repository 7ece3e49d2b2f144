#pragma once

#include <functional>
#include <vector>

#include "hegl/dynamics.hpp"

namespace hegl {

// Analytic gauge function chi(x, y, t) with closed-form gradient and time
// derivative. Sampled chi is not supported for time-dependent gauges since
// the maps need chi_dot exactly.
struct GaugeField {
  std::function<double(double, double, double)> chi;
  std::function<Vec3(double, double, double)> grad_chi;
  std::function<double(double, double, double)> chi_dot;

  static GaugeField zero();
  static GaugeField constant(double c);
  // chi = amp cos(2 pi mode x / lx): zero normal slope at the x walls
  static GaugeField cosine_x(double amp, int mode, double lx);
};

// psi = phi e^{i chi}, A = v_s + grad(chi)/kappa, phi_pot = phi_s - chi_dot/kappa
ComplexState gauge_forward(const FieldState& real, const GaugeField& chi,
                           const ModelParams& prm);
// exact algebraic inverse (no division by psi anywhere)
FieldState gauge_backward(const ComplexState& cplx, const GaugeField& chi,
                          const ModelParams& prm);

// Max-norm residuals of the transformation identities, both sides computed
// with the same discrete operators. The capillary identity divides by |psi|^2
// and skips cells with |psi|^2 < eps_reg (skipped count reported).
struct IdentityReport {
  double potential_rate = 0.0;  // vs_dot + grad phi_s  vs  A_dot + grad phi_pot
  double current = 0.0;         // phi^2 v_s  vs  |psi|^2 A - Im(psi* grad psi)/kappa
  double phase_rate = 0.0;      // phi phi_dot  vs  Re(psi* psi_dot)
  double dissipation = 0.0;     // phi_dot^2 + kappa^2 phi^2 phi_s^2  vs  complex form
  double capillary = 0.0;       // grad phi (x) grad phi  vs  N (x) N / (4 |psi|^2)
  int excluded_cells = 0;
  double max_residual() const;
};
IdentityReport check_identities(const FieldState& real, const ComplexState& cplx,
                                const GaugeField& chi, const ModelParams& prm,
                                const StepConfig& cfg);

struct ComplexStepResult {
  ComplexState state;
  double constraint_residual = 0.0;
  double sigma_min = 0.0;
  double max_psi_sq = 0.0;
};

// One explicit midpoint step of the gauge-transformed system with the same
// stage structure as the real stepper. phi_pot is closed by the algebraic
// solve of the transformed superfluid-current equation (static gauge,
// chi_dot = 0); the normal-sector kernels are shared with the real stepper.
class ComplexStepper {
 public:
  ComplexStepper(const Grid& g, StepConfig cfg, ModelParams prm);
  ComplexStepResult step(const ComplexState& s0);
  const StepConfig& config() const { return cfg_; }

 private:
  struct Rates;
  StepConfig cfg_;
  ModelParams prm_;
  Grid grid_;
  Field q_warm_;

  void evaluate(ComplexState& s, Rates& r);
  ComplexState advance(const ComplexState& s0, Rates& r, double delta, int stage,
                       double* resid_out);
};

ComplexStepResult complex_step(const ComplexState& s0, const StepConfig& cfg,
                               const ModelParams& prm);

// Gauge-invariant observables of a complex state under a known static gauge.
struct Observables {
  Field n;        // superfluid concentration |psi|^2 (= phi^2)
  Vec3Field vs;   // A - grad(chi)/kappa
  Field phi_s;    // phi_pot + chi_dot/kappa
  Vec3Field vn;
  Field p, rho, theta;
};
Observables observables(const ComplexState& s, const GaugeField& chi, double kappa);

// Max-abs differences of all invariant observables between two states.
struct ObservableDelta {
  double n = 0, vs = 0, phi_s = 0, vn = 0, p = 0, rho = 0, theta = 0;
  double max() const;
};
ObservableDelta compare_observables(const Observables& a, const Observables& b);

// Dual-run driver: evolve gauge_forward(s0, chi1) and gauge_forward(s0, chi2)
// with the complex stepper and record the invariant-observable gap per step.
struct DualRunRow {
  double t;
  ObservableDelta delta;
};
std::vector<DualRunRow> gauge_dual_run(const FieldState& s0, const GaugeField& chi1,
                                       const GaugeField& chi2, int steps,
                                       const StepConfig& cfg, const ModelParams& prm);

}  // namespace hegl
