#include "hegl/thermo.hpp"

#include <cmath>
#include <stdexcept>

namespace hegl {

PotentialEval potential_w(double phi, double m, const ModelParams& p) {
  PotentialEval e;
  const double p2 = phi * phi;
  e.F = 0.25 * p2 * p2 - 0.5 * p2;
  e.dF = phi * (p2 - 1.0);
  e.G = 0.5 * p2;
  e.dG = phi;
  e.W = p.theta_lambda * e.F + m * e.G;
  e.dW = p.theta_lambda * e.dF + m * e.dG;
  return e;
}

double stationary_phase(double m, const ModelParams& p) {
  if (m >= p.theta_lambda) return 0.0;
  return std::sqrt(1.0 - m / p.theta_lambda);
}

namespace {
double psi0(double theta, const ModelParams& p) { return -p.c0 * theta * std::log(theta); }

void require_positive_theta(double theta) {
  if (!(theta > 0.0)) throw std::domain_error("theta must be positive");
}
}  // namespace

double free_energy_density(double phi, Vec3 grad_phi, double theta, const ModelParams& p) {
  require_positive_theta(theta);
  const double p2 = phi * phi;
  return p.theta_lambda * (0.25 * p2 * p2 - 0.5 * p2) + 0.5 * theta * p2 +
         norm2(grad_phi) / (2.0 * p.kappa * p.kappa) + psi0(theta, p);
}

double entropy_density(double phi, double theta, const ModelParams& p) {
  require_positive_theta(theta);
  return -0.5 * phi * phi + p.c0 * (std::log(theta) + 1.0);
}

double internal_energy_density(double phi, Vec3 grad_phi, double theta, const ModelParams& p) {
  require_positive_theta(theta);
  const double p2 = phi * phi;
  return norm2(grad_phi) / (2.0 * p.kappa * p.kappa) +
         p.theta_lambda * (0.25 * p2 * p2 - 0.5 * p2) + p.c0 * theta;
}

double total_energy_density(double phi, Vec3 grad_phi, double theta, Vec3 v_s, Vec3 v_n,
                            const ModelParams& p) {
  const double p2 = phi * phi;
  return internal_energy_density(phi, grad_phi, theta, p) + 0.5 * p2 * norm2(v_s) +
         0.5 * (1.0 - p2) * norm2(v_n);
}

Vec3 heat_flux(double phi, double theta, Vec3 grad_theta, Vec3 v_s, Vec3 v_n, double rho,
               const ModelParams& p) {
  require_positive_theta(theta);
  const double k = p.k0(theta);
  const double c = rho * phi * phi * theta;
  return {-k * grad_theta.x - c * (v_s.x - v_n.x), -k * grad_theta.y - c * (v_s.y - v_n.y),
          -k * grad_theta.z - c * (v_s.z - v_n.z)};
}

double latent_heat(const ModelParams& p, std::optional<double> phi0_override) {
  const double th = p.theta_lambda;
  const double phi0 = phi0_override.value_or(stationary_phase(th, p));
  return th * (entropy_density(phi0, th, p) - entropy_density(0.0, th, p));
}

}  // namespace hegl
