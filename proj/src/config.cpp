#include "hegl/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hegl {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_num(const std::string& sec, const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("[" + sec + "] " + key + ": not a number: " + v);
  return x;
}

long to_int(const std::string& sec, const std::string& key, const std::string& v) {
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("[" + sec + "] " + key + ": not an integer: " + v);
  return x;
}

Vec3 to_vec(const std::string& sec, const std::string& key, const std::string& v) {
  std::istringstream is(v);
  std::vector<double> xs;
  double x;
  while (is >> x) xs.push_back(x);
  if (!is.eof() || (xs.size() != 1 && xs.size() != 3))
    throw ConfigError("[" + sec + "] " + key + ": expected one or three numbers: " + v);
  if (xs.size() == 1) return {xs[0], 0.0, 0.0};  // single value: x component
  return {xs[0], xs[1], xs[2]};
}

bool to_bool(const std::string& sec, const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw ConfigError("[" + sec + "] " + key + ": not a boolean: " + v);
}

}  // namespace

Config parse_config_text(const std::string& text) {
  Config c;
  std::istringstream is(text);
  std::string line, section;
  std::vector<std::string> unknown;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("bad section header: " + line);
      section = trim(line.substr(1, line.size() - 2));
      static const char* known_sections[] = {"params", "grid",  "step",  "init",
                                             "output", "sweep", "gauge", "check"};
      if (std::find_if(std::begin(known_sections), std::end(known_sections),
                       [&](const char* s) { return section == s; }) ==
          std::end(known_sections))
        unknown.push_back("[" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const std::string sk = section + "." + key;

    if (sk == "params.tau") c.params.tau = to_num(section, key, val);
    else if (sk == "params.kappa") c.params.kappa = to_num(section, key, val);
    else if (sk == "params.nu") c.params.nu = to_num(section, key, val);
    else if (sk == "params.lambda") c.params.lambda = to_num(section, key, val);
    else if (sk == "params.theta_lambda") c.params.theta_lambda = to_num(section, key, val);
    else if (sk == "params.c0") c.params.c0 = to_num(section, key, val);
    else if (sk == "params.k0_const") c.params.k0_const = to_num(section, key, val);
    else if (sk == "params.k0_slope") c.params.k0_slope = to_num(section, key, val);
    else if (sk == "params.eps_reg") c.params.eps_reg = to_num(section, key, val);
    else if (sk == "params.g") c.params.g = to_vec(section, key, val);
    else if (sk == "params.r") c.params.r = to_num(section, key, val);
    else if (sk == "params.omega_bc") c.params.omega_bc = to_vec(section, key, val);
    else if (sk == "grid.dim") c.grid.dim = int(to_int(section, key, val));
    else if (sk == "grid.nx") c.grid.nx = int(to_int(section, key, val));
    else if (sk == "grid.ny") c.grid.ny = int(to_int(section, key, val));
    else if (sk == "grid.hx") c.grid.hx = to_num(section, key, val);
    else if (sk == "grid.hy") c.grid.hy = to_num(section, key, val);
    else if (sk == "step.dt") c.step.dt = to_num(section, key, val);
    else if (sk == "step.t_end") c.step.t_end = to_num(section, key, val);
    else if (sk == "step.projection_tol") c.step.projection_tol = to_num(section, key, val);
    else if (sk == "step.material_derivative") {
      if (val == "advective") c.step.material_derivative = StepConfig::Dots::advective;
      else if (val == "partial") c.step.material_derivative = StepConfig::Dots::partial;
      else throw ConfigError("[step] material_derivative: advective or partial, got " + val);
    } else if (sk == "step.record_every") c.step.record_every = int(to_int(section, key, val));
    else if (sk == "step.tol_phase") c.step.tol_phase = to_num(section, key, val);
    else if (sk == "step.eps_mass") c.step.eps_mass = to_num(section, key, val);
    else if (sk == "step.pin") {
      std::istringstream ps(val);
      std::string f;
      while (ps >> f) {
        if (f == "phi") c.step.pin_phi = true;
        else if (f == "vs") c.step.pin_vs = true;
        else if (f == "vn") c.step.pin_vn = true;
        else if (f == "rho") c.step.pin_rho = true;
        else if (f == "theta") c.step.pin_theta = true;
        else throw ConfigError("[step] pin: unknown field " + f);
      }
    } else if (sk == "step.seed") c.seed = std::strtoul(val.c_str(), nullptr, 10);
    else if (sk == "step.threads") c.threads = int(to_int(section, key, val));
    else if (sk == "init.kind") {
      if (val == "uniform") c.init.kind = InitSpec::Kind::uniform;
      else if (val == "profile") c.init.kind = InitSpec::Kind::profile;
      else if (val == "snapshot") c.init.kind = InitSpec::Kind::snapshot;
      else throw ConfigError("[init] kind: uniform, profile or snapshot, got " + val);
    } else if (sk == "init.phi") c.init.phi = to_num(section, key, val);
    else if (sk == "init.theta") c.init.theta = to_num(section, key, val);
    else if (sk == "init.rho") c.init.rho = to_num(section, key, val);
    else if (sk == "init.p") c.init.p = to_num(section, key, val);
    else if (sk == "init.vsx") c.init.vs.x = to_num(section, key, val);
    else if (sk == "init.vsy") c.init.vs.y = to_num(section, key, val);
    else if (sk == "init.vsz") c.init.vs.z = to_num(section, key, val);
    else if (sk == "init.vnx") c.init.vn.x = to_num(section, key, val);
    else if (sk == "init.vny") c.init.vn.y = to_num(section, key, val);
    else if (sk == "init.vnz") c.init.vn.z = to_num(section, key, val);
    else if (sk == "init.profile") c.init.profile = val;
    else if (sk == "init.profile_amp") c.init.profile_amp = to_num(section, key, val);
    else if (sk == "init.profile_width") c.init.profile_width = to_num(section, key, val);
    else if (sk == "init.snapshot") c.init.snapshot_path = val;
    else if (sk == "output.dir") c.out_dir = val;
    else if (sk == "output.prefix") c.out_prefix = val;
    else if (sk == "output.series") c.out_series = to_bool(section, key, val);
    else if (sk == "output.snapshots") c.out_snapshots = to_bool(section, key, val);
    else if (sk == "sweep.theta_min") c.sweep_theta_min = to_num(section, key, val);
    else if (sk == "sweep.theta_max") c.sweep_theta_max = to_num(section, key, val);
    else if (sk == "sweep.theta_n") c.sweep_theta_n = int(to_int(section, key, val));
    else if (sk == "sweep.p_min") c.sweep_p_min = to_num(section, key, val);
    else if (sk == "sweep.p_max") c.sweep_p_max = to_num(section, key, val);
    else if (sk == "sweep.p_n") c.sweep_p_n = int(to_int(section, key, val));
    else if (sk == "sweep.vs2") c.sweep_vs2 = to_num(section, key, val);
    else if (sk == "sweep.vn2") c.sweep_vn2 = to_num(section, key, val);
    else if (sk == "gauge.chi_amp") c.gauge_chi_amp = to_num(section, key, val);
    else if (sk == "gauge.chi_mode") c.gauge_chi_mode = int(to_int(section, key, val));
    else if (sk == "gauge.steps") c.gauge_steps = int(to_int(section, key, val));
    else if (sk == "check.quick") c.check_quick = to_bool(section, key, val);
    else unknown.push_back(sk);
  }
  if (!unknown.empty()) {
    std::string msg = "unknown configuration keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }
  if (c.grid.dim == 1) {
    c.grid.ny = 1;
    if (c.params.omega_bc.x != 0 || c.params.omega_bc.y != 0 || c.params.omega_bc.z != 0)
      throw ConfigError("omega_bc must vanish in 1D (vector fields carry only x components)");
  }
  c.grid.validate();
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace hegl
