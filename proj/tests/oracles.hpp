// Test-only oracles, independent of the library's implementation paths:
// a derivative-free minimizer, an adaptive embedded Runge-Kutta integrator,
// and least-squares decay-rate fitting.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

// Derivative-free minimization: golden-section localization of the basin,
// then bisection on the sign of the wide symmetric difference
// f(x + delta) - f(x - delta). Interval shrinking alone stalls at the
// value-noise floor on a flat bottom; the symmetric difference stays
// resolvable far below it and handles quartic minima.
inline double golden_min(const std::function<double(double)>& f, double a, double b,
                         double tol = 1e-12) {
  (void)tol;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  for (int it = 0; it < 200 && (b - a) > 1e-4; ++it) {
    if (f(c) < f(d)) b = d;
    else a = c;
    c = b - gr * (b - a);
    d = a + gr * (b - a);
  }
  const double x0 = 0.5 * (a + b);
  const double delta = 1e-5;
  auto dsym = [&](double x) { return f(x + delta) - f(x - delta); };
  double lo = x0 - 2e-3, hi = x0 + 2e-3;
  if (!(dsym(lo) < 0.0 && dsym(hi) > 0.0)) return x0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (dsym(mid) > 0.0) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

// adaptive RK45 (Cash-Karp) for a scalar ODE y' = f(t, y)
inline double rk45(const std::function<double(double, double)>& f, double y0, double t0,
                   double t1, double tol = 1e-11) {
  double t = t0, y = y0, h = (t1 - t0) / 100.0;
  const double hmin = (t1 - t0) * 1e-12;
  int guard = 0;
  while (t < t1) {
    if (++guard > 100000000) throw std::runtime_error("rk45: too many steps");
    if (t + h > t1) h = t1 - t;
    const double k1 = f(t, y);
    const double k2 = f(t + h / 5, y + h * k1 / 5);
    const double k3 = f(t + 3 * h / 10, y + h * (3 * k1 + 9 * k2) / 40);
    const double k4 = f(t + 3 * h / 5, y + h * (3 * k1 / 10 - 9 * k2 / 10 + 6 * k3 / 5));
    const double k5 =
        f(t + h, y + h * (-11 * k1 / 54 + 5 * k2 / 2 - 70 * k3 / 27 + 35 * k4 / 27));
    const double k6 = f(t + 7 * h / 8,
                        y + h * (1631 * k1 / 55296 + 175 * k2 / 512 + 575 * k3 / 13824 +
                                 44275 * k4 / 110592 + 253 * k5 / 4096));
    const double y5 = y + h * (37 * k1 / 378 + 250 * k3 / 621 + 125 * k4 / 594 +
                               512 * k6 / 1771);
    const double y4 = y + h * (2825 * k1 / 27648 + 18575 * k3 / 48384 + 13525 * k4 / 55296 +
                               277 * k5 / 14336 + k6 / 4);
    const double err = std::fabs(y5 - y4);
    const double sc = tol * (1.0 + std::fabs(y));
    if (err <= sc || h <= hmin) {
      t += h;
      y = y5;
    }
    const double fac = (err > 0) ? 0.9 * std::pow(sc / err, 0.2) : 2.0;
    h *= std::min(2.0, std::max(0.2, fac));
    if (h < hmin) h = hmin;
  }
  return y;
}

// least-squares slope of log|y| against t (exponential decay rate, negated)
inline double decay_rate(const std::vector<double>& t, const std::vector<double>& y) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double n = double(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double ly = std::log(std::fabs(y[k]));
    st += t[k];
    sy += ly;
    stt += t[k] * t[k];
    sty += t[k] * ly;
  }
  return -(n * sty - st * sy) / (n * stt - st * st);
}

}  // namespace oracle
