#include "mems/params.hpp"

#include <cmath>

namespace mems {

Params nondimensionalize(const DimensionalInputs& d, double sigma) {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  require(d.H > 0.0, "H must be positive");
  require(d.L > 0.0, "L must be positive");
  require(d.V > 0.0, "V must be positive");
  require(d.eps0 > 0.0, "eps0 must be positive");
  require(d.B > 0.0, "B must be positive");
  require(d.T >= 0.0, "T must be nonnegative");
  require(sigma > -1.0 && sigma < 1.0, "sigma must lie in (-1,1)");

  Params p;
  p.eps = d.H / d.L;
  p.lambda = d.eps0 * d.V * d.V * d.L / (2.0 * p.eps * p.eps * p.eps);
  p.beta = d.B;
  p.tau = d.T * d.L * d.L;
  p.sigma = sigma;
  p.kappa = 1.0;
  return p;
}

std::vector<std::string> validate(const Params& p) {
  std::vector<std::string> out;
  if (!(p.beta > 0.0)) out.emplace_back("beta <= 0");
  if (!(p.tau >= 0.0)) out.emplace_back("tau < 0");
  if (!(p.sigma > -1.0 && p.sigma < 1.0)) out.emplace_back("sigma not in (-1,1)");
  if (!(p.eps >= 0.0)) out.emplace_back("eps < 0");
  if (!(p.lambda >= 0.0)) out.emplace_back("lambda < 0");
  if (!(p.kappa >= 0.0)) out.emplace_back("kappa < 0");
  return out;
}

}  // namespace mems
