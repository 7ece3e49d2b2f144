#pragma once

#include <stdexcept>
#include <string>

#include "hegl/diagnostics.hpp"
#include "hegl/poisson.hpp"
#include "hegl/state.hpp"

namespace hegl {

struct StepConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  double projection_tol = 1e-8;  // max-norm tolerance on the divergence constraint
  enum class Dots { advective, partial };
  // interpretation of the model's overdots: d/dt + v_n . grad (advective,
  // the near-transition approximation) or plain d/dt (partial)
  Dots material_derivative = Dots::advective;
  int record_every = 1;
  double tol_phase = 1e-6;  // monitor bound for phi^2 <= 1 + tol_phase
  double eps_mass = 1e-8;   // abort threshold for min rho (1 - phi^2)
  int max_cg_iter = 100000;
  Exec exec = Exec::omp;
  // Pins freeze a field (its update is skipped); used by homogeneous
  // relaxation and oracle runs. Pinning v_n also skips the projection.
  bool pin_phi = false, pin_vs = false, pin_vn = false, pin_rho = false, pin_theta = false;
};

// Raised when a sub-step cannot continue (positivity loss, degenerate normal
// mass, projection non-convergence).
struct StepFailure : std::runtime_error {
  std::string field;
  int stage;
  double value;
  StepFailure(int stage_, std::string field_, const std::string& what, double value_ = 0.0)
      : std::runtime_error(what), field(std::move(field_)), stage(stage_), value(value_) {}
};

// --- individual operations (unit-test surface) ---

// m = theta + lambda p + |v_s|^2 - |v_n|^2
void tilt_m(const FieldState& s, const ModelParams& prm, Field& out);

// phi_s = -div(rho phi^2 v_s) / (tau kappa^2 (rho phi^2 + eps_reg))
void solve_phi_s(const FieldState& s, const ModelParams& prm, Field& out);

// material rate of phi: (div(rho grad phi)/kappa^2 - rho theta_l phi(phi^2-1)
//                        - rho m phi) / (tau rho)
void phase_rhs(const FieldState& s, const Field& m, const ModelParams& prm, Field& out);

// material rate of v_s: -grad phi_s - curl v_n - rho phi^2 v_s + grad theta
void vs_rhs(const FieldState& s, const ModelParams& prm, Vec3Field& out);

// explicit density update (material mode adds -v_n . grad rho transport);
// throws StepFailure if the result loses positivity
Field continuity_step(const FieldState& s, double dt, StepConfig::Dots dots,
                      Exec ex = default_exec());

// material rate of theta: the heat equation right side over rho c0.
// phi_dot/vs_dot must be the same evaluations used by the phase/velocity
// updates of the step.
void temperature_rhs(const FieldState& s, const Field& phi_dot, const Vec3Field& vs_dot,
                     const ModelParams& prm, Field& out);

// All eq4 terms except grad p, over the normal mass (the projection
// predictor), in the integrated d/dt form.
void vn_rhs(const FieldState& s, const StepConfig& cfg, const ModelParams& prm,
            Vec3Field& out);

struct VnStepResult {
  SolveReport solve;
  double constraint_residual = 0.0;  // max |div v_n - lambda rho phi phi_dot|
  double mean_defect = 0.0;          // |mean target| removed for Neumann compatibility
};

// Predictor (all eq4 terms except grad p) + pressure projection enforcing
// div v_n = lambda rho phi phi_dot up to its spatial mean. Updates s.vn and
// s.p in place. phi_dot is the rate used for the constraint target.
VnStepResult vn_step(FieldState& s, const Field& phi_dot, double dt, const StepConfig& cfg,
                     const ModelParams& prm);

// --- stepper ---

// Rate fields of one stage evaluation (exposed for diagnostics coherence).
struct StageRates {
  Field phi_dot;        // material rate
  Field dphi_dt;        // partial-time rate actually integrated
  Vec3Field vs_dot, dvs_dt;
  Vec3Field dvn_dt_nop; // eq4 without the pressure term, partial-time form
  Field drho_dt;
  Field dtheta_dt;
  Field target;         // lambda rho phi phi_dot
  Field sigma;          // entropy production density
  Field div_vn;
  Field mass;           // rho (1 - phi^2), all cells
  double min_mass = 0.0;
};

struct StepResult {
  FieldState state;
  DiagnosticsReport report;
};

// One explicit midpoint step through the sequence phi_s solve -> tilt ->
// phase -> v_s -> v_n with projection -> continuity -> temperature, with all
// ghost rules re-imposed and diagnostics assembled from the two snapshots.
class Stepper {
 public:
  Stepper(const Grid& g, StepConfig cfg, ModelParams prm);

  StepResult step(const FieldState& s0);

  const StepConfig& config() const { return cfg_; }
  StepConfig& config() { return cfg_; }
  const ModelParams& params() const { return prm_; }

 private:
  struct Impl;
  StepConfig cfg_;
  ModelParams prm_;
  Grid grid_;
  // workspace reused across steps
  StageRates r1_, r2_;
  Field q_warm_;  // pressure warm start
  friend struct Impl;

  void evaluate(FieldState& s, StageRates& r);
  FieldState advance(const FieldState& s0, StageRates& r, double delta, int stage,
                     VnStepResult* proj_out);
};

// Convenience wrapper building a Stepper per call.
StepResult step(const FieldState& s0, const StepConfig& cfg, const ModelParams& prm);

// Advective CFL number of a state for a given dt.
double advective_cfl(const FieldState& s, double dt);

// Conservative explicit stability bound for dt from the diffusive and
// relaxation coefficients (used by runners to pick dt).
double stable_dt(const Grid& g, const ModelParams& prm, double theta_max, double safety);

}  // namespace hegl
