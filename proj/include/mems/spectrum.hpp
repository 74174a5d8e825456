#pragma once

#include <memory>

#include "mems/stationary.hpp"

namespace mems {

struct EigenPair {
  double mu1 = 0.0;
  PlateField phi1;  // max value 1
  double residual = 0.0;  // |A phi1 - mu1 phi1|_inf over nodes 0..n-1
  int iterations = 0;
  bool converged = false;
};

struct SpectralOptions {
  double tol = 1e-12;
  int max_iter = 500;
};

/// Smallest eigenvalue of the hinged operator by inverse power iteration
/// with disc-quadrature Rayleigh quotients.
EigenPair principal_eigenpair(const Params& p, std::shared_ptr<const RadialGrid> grid, const SpectralOptions& opt = {});

/// Same, reusing an existing factorisation (shift must be 0).
EigenPair principal_eigenpair(const PlateOperator& plate, const SpectralOptions& opt = {});

/// Next eigenvalue by inverse iteration deflated against phi1.
EigenPair second_eigenpair(const PlateOperator& plate, const EigenPair& first, const SpectralOptions& opt = {});

/// <A w, w> / <w, w> in the disc inner product.
double rayleigh_quotient(const PlateOperator& plate, const PlateField& w);

struct StabilityReport {
  double lambda = 0.0;
  double min_real_part = 0.0;
  bool stable = false;
};

/// Smallest real part of the spectrum of A + lambda Dg(U), dense.
StabilityReport linearized_spectral_bound(ForceModel& model, const PlateOperator& plate, const Params& p,
                                          const PlateField& u);

struct CertificateReport {
  double load = 0.0;         // lambda * int phi1
  double work = 0.0;         // int (-A U) phi1
  double projected = 0.0;    // -mu1 * int phi1 U
  double bound = 0.0;        // mu1 * int phi1
  bool load_le_work = false;
  bool work_eq_projected = false;
  bool projected_lt_bound = false;
  bool holds() const { return load_le_work && work_eq_projected && projected_lt_bound; }
};

/// Evaluates lambda int phi1 <= int (-A U) phi1 = -mu1 int phi1 U < mu1 int phi1
/// with relative slack `slack`.
CertificateReport nonexistence_certificate(const PlateOperator& plate, const Params& p, const EigenPair& eig,
                                           const PlateField& u, double slack = 1e-6);

}  // namespace mems
