#include "hegl/phase_diagram.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "hegl/thermo.hpp"

namespace hegl {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / double(n - 1);
  return v;
}

double equilibrium_phase(double theta, double p, double vs2, double vn2,
                         const ModelParams& prm) {
  return stationary_phase(theta + prm.lambda * p + vs2 - vn2, prm);
}

SweepResult sweep(const std::vector<double>& theta_grid, const std::vector<double>& p_grid,
                  double vs2, double vn2, const ModelParams& prm) {
  for (std::size_t k = 1; k < theta_grid.size(); ++k)
    if (!(theta_grid[k] > theta_grid[k - 1]))
      throw std::invalid_argument("theta grid must be strictly increasing");
  for (std::size_t k = 1; k < p_grid.size(); ++k)
    if (!(p_grid[k] > p_grid[k - 1]))
      throw std::invalid_argument("p grid must be strictly increasing");

  SweepResult r;
  r.theta_grid = theta_grid;
  r.p_grid = p_grid;
  r.map.reserve(theta_grid.size() * p_grid.size());

  for (double p : p_grid) {
    for (double th : theta_grid)
      r.map.push_back({th, p, equilibrium_phase(th, p, vs2, vn2, prm)});

    // zero contour along theta at this p. phi_eq^2 is exactly linear in
    // theta on the superfluid side, so extrapolating the last two positive
    // samples recovers the crossing; fall back to the first zero sample
    // when fewer than two positive samples exist.
    const std::size_t base = r.map.size() - theta_grid.size();
    std::optional<double> root;
    for (std::size_t k = 0; k < theta_grid.size(); ++k) {
      if (r.map[base + k].phi_eq == 0.0) {
        if (k == 0) break;  // window entirely in the normal phase
        if (k >= 2) {
          const double t1 = theta_grid[k - 2], t2 = theta_grid[k - 1];
          const double f1 = r.map[base + k - 2].phi_eq, f2 = r.map[base + k - 1].phi_eq;
          const double a1 = f1 * f1, a2 = f2 * f2;
          const double t = (a1 == a2) ? theta_grid[k]
                                      : t2 + a2 * (t2 - t1) / (a1 - a2);
          root = std::min(t, theta_grid[k]);
        } else {
          root = theta_grid[k];
        }
        break;
      }
    }
    if (root) {
      r.line.p.push_back(p);
      r.line.theta_line.push_back(*root);
    }
  }

  if (r.line.p.size() >= 2) {
    r.line.found = true;
    // least squares p = slope * theta + intercept
    double st = 0, sp = 0, stt = 0, stp = 0;
    const double n = double(r.line.p.size());
    for (std::size_t k = 0; k < r.line.p.size(); ++k) {
      st += r.line.theta_line[k];
      sp += r.line.p[k];
      stt += r.line.theta_line[k] * r.line.theta_line[k];
      stp += r.line.theta_line[k] * r.line.p[k];
    }
    const double denom = n * stt - st * st;
    double span = 0.0;
    for (std::size_t k = 0; k < r.line.theta_line.size(); ++k)
      span = std::max(span, std::fabs(r.line.theta_line[k] - st / n));
    if (span < 1e-12 || std::fabs(denom) < 1e-14 * n * stt) {
      r.line.vertical = true;
    } else {
      r.line.slope = (n * stp - st * sp) / denom;
      r.line.intercept = (sp - r.line.slope * st) / n;
    }
  }
  return r;
}

Trajectory relax_to_equilibrium(double theta, double p, double vs2, double phi0,
                                double t_end, double dt, const ModelParams& prm) {
  const double m = theta + prm.lambda * p + vs2;
  auto f = [&](double phi) {
    return (-prm.theta_lambda * phi * (phi * phi - 1.0) - m * phi) / prm.tau;
  };
  Trajectory tr;
  double phi = phi0, t = 0.0;
  tr.t.push_back(t);
  tr.phi.push_back(phi);
  while (t < t_end - 0.5 * dt) {
    const double mid = phi + 0.5 * dt * f(phi);
    phi += dt * f(mid);
    t += dt;
    tr.t.push_back(t);
    tr.phi.push_back(phi);
  }
  return tr;
}

void write_phase_map_csv(const SweepResult& r, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "theta,p,phi_eq\n";
  char buf[160];
  for (const auto& pt : r.map) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", pt.theta, pt.p, pt.phi_eq);
    os << buf;
  }
}

void write_lambda_line_csv(const SweepResult& r, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "p,theta_line\n";
  char buf[96];
  for (std::size_t k = 0; k < r.line.p.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", r.line.p[k], r.line.theta_line[k]);
    os << buf;
  }
}

}  // namespace hegl
