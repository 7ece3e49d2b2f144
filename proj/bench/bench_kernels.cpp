// Kernel throughput comparison: serial reference vs OpenMP sweeps, plus a
// whole-step timing. Results print as a fixed-width table.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "hegl/check.hpp"
#include "hegl/dynamics.hpp"
#include "hegl/ops.hpp"

using namespace hegl;
using clk = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& f, int reps) {
  f();  // warm up
  const auto t0 = clk::now();
  for (int k = 0; k < reps; ++k) f();
  const auto t1 = clk::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void row(const char* name, double serial_ms, double omp_ms) {
  std::printf("%-28s %10.3f %10.3f %8.2fx\n", name, serial_ms, omp_ms, serial_ms / omp_ms);
}

}  // namespace

int main(int argc, char** argv) {
  int n = 512;
  if (argc > 1) n = std::atoi(argv[1]);
  const Grid g = Grid::make_2d(n, n, 1.0 / n, 1.0 / n);
  ModelParams prm;
  FieldState s = random_smooth_state(g, 42, prm, 0.1);

  Field f = s.theta, out(g);
  Vec3Field v = s.vn, vout(g);
  fill_ghosts_scalar(g, f);
  fill_ghosts_vector(g, v, VecRule::no_slip);

  std::printf("grid %dx%d, %d threads\n", n, n, omp_get_max_threads());
  std::printf("%-28s %10s %10s %8s\n", "kernel", "serial ms", "omp ms", "speedup");

  const int reps = 20;
  row("grad",
      time_ms([&] { grad(g, f, vout, Exec::serial); }, reps),
      time_ms([&] { grad(g, f, vout, Exec::omp); }, reps));
  row("lap",
      time_ms([&] { lap(g, f, out, Exec::serial); }, reps),
      time_ms([&] { lap(g, f, out, Exec::omp); }, reps));
  row("div_coeff_grad",
      time_ms([&] { div_coeff_grad(g, s.rho, f, out, Exec::serial); }, reps),
      time_ms([&] { div_coeff_grad(g, s.rho, f, out, Exec::omp); }, reps));
  row("curl",
      time_ms([&] { curl(g, v, vout, Exec::serial); }, reps),
      time_ms([&] { curl(g, v, vout, Exec::omp); }, reps));
  row("div_outer",
      time_ms([&] { div_outer(g, v, vout, Exec::serial); }, reps),
      time_ms([&] { div_outer(g, v, vout, Exec::omp); }, reps));

  StepConfig cfg;
  cfg.dt = 0.25 * stable_dt(g, prm, 3.0, 0.5);
  cfg.exec = Exec::serial;
  Stepper st_serial(g, cfg, prm);
  cfg.exec = Exec::omp;
  Stepper st_omp(g, cfg, prm);
  row("full step",
      time_ms([&] { st_serial.step(s); }, 3),
      time_ms([&] { st_omp.step(s); }, 3));
  return 0;
}
