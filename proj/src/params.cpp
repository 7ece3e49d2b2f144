#include "hegl/params.hpp"

#include <algorithm>
#include <sstream>

namespace hegl {

std::vector<std::string> validate_params(const ModelParams& p, double theta_min,
                                         double theta_max) {
  std::vector<std::string> bad;
  if (!(theta_min > 0.0) || !(theta_max >= theta_min))
    bad.push_back("theta range empty or nonpositive");
  if (!(p.tau > 0.0)) bad.push_back("tau nonpositive");
  if (!(p.kappa > 0.0)) bad.push_back("kappa nonpositive");
  if (p.nu < 0.0) bad.push_back("nu negative");
  if (p.lambda < 0.0) bad.push_back("lambda negative");
  if (!(p.theta_lambda > 0.0)) bad.push_back("theta_lambda nonpositive");
  if (!(p.c0 > 0.0)) bad.push_back("c0 nonpositive");
  if (p.eps_reg < 0.0) bad.push_back("eps_reg negative");
  // k0 is affine, so checking the endpoints covers the range; report the
  // endpoint where the law dips lowest
  const double klo = p.k0(theta_min), khi = p.k0(theta_max);
  if (std::min(klo, khi) < 0.0) {
    std::ostringstream os;
    os << "k0 negative at theta=" << (khi <= klo ? theta_max : theta_min);
    bad.push_back(os.str());
  }
  return bad;
}

}  // namespace hegl
