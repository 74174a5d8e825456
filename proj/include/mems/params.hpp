#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mems {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The plate touched (or was about to touch) the ground plate: min u <= -1.
class TouchdownError : public Error {
 public:
  using Error::Error;
};

/// A linear or eigenvalue solve failed.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Dimensionless model constants.
///
/// eps = 0 selects the small gap model. kappa is the boundary curvature
/// (1 on the unit disc); it is carried through every boundary row so that
/// non-unit values are honoured even though the geometry is fixed.
struct Params {
  double beta = 1.0;
  double tau = 0.0;
  double sigma = 0.0;
  double eps = 0.1;
  double lambda = 0.0;
  double kappa = 1.0;
};

/// Physical inputs of the device, in any consistent unit system.
struct DimensionalInputs {
  double B = 1.0;     // flexural rigidity
  double T = 0.0;     // stress coefficient
  double V = 1.0;     // applied voltage
  double H = 1.0;     // gap height
  double L = 1.0;     // characteristic length
  double eps0 = 1.0;  // vacuum permittivity
};

/// Converts physical inputs to dimensionless parameters.
///
/// eps = H/L, lambda = eps0 V^2 L / (2 eps^3), beta = B, tau = T L^2.
/// Throws std::invalid_argument on inadmissible inputs.
Params nondimensionalize(const DimensionalInputs& d, double sigma);

/// Range violations of p, as human-readable messages; empty iff valid.
std::vector<std::string> validate(const Params& p);

}  // namespace mems
