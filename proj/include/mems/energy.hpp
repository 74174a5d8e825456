#pragma once

#include "mems/grid.hpp"
#include "mems/params.hpp"
#include "mems/plate.hpp"
#include "mems/potential.hpp"

namespace mems {

struct EnergyReport {
  double e_mech = 0.0;
  double e_elec = 0.0;
  double e_total = 0.0;
  double bending_lower_bound = 0.0;
};

struct MechanicalEnergy {
  double value;
  /// beta (1 - |sigma|)/2 * integral of |D^2 u|^2; never exceeds the
  /// bending part of value.
  double lower_bound;
};

/// Bending, torsion and stretching energy of a radial deflection.
///
/// In radial symmetry the Hessian has eigenvalues u_rr and u_r/r, so the
/// bending density (1/2)(Lap u)^2 + (1 - sigma)[u_12^2 - u_11 u_22] equals
/// (1/2)(u_rr^2 + (u_r/r)^2) + sigma u_rr u_r/r. The density is evaluated
/// node by node and integrated with the disc quadrature; the lower bound
/// uses the same nodal values, so the inequality holds exactly.
MechanicalEnergy mechanical_energy(const PlateField& u, const Params& p);

/// -(1/2) * integral over Omega(u) of eps^2 |grad' psi|^2 + (d_z psi)^2,
/// evaluated on the cylinder with volume element (1 + u) d eta dx.
double electrostatic_energy(const PotentialField& phi, const Params& p);

/// e_total = e_mech + 2 lambda e_elec; critical points of this weighting
/// solve A u = -lambda g(u).
EnergyReport total_energy(const PotentialField& phi, const Params& p);

/// Outcome of comparing a central difference of an energy with the
/// analytic first variation.
struct VariationCheck {
  double fd = 0.0;
  double formula = 0.0;
  double defect = 0.0;
};

/// Analytic first variation of the mechanical energy:
///   integral (beta Lap^2 u - tau Lap u) v dx
///   + beta (Lap u(1) - (1 - sigma) kappa u'(1)) * 2 pi v'(1).
/// With include_boundary = false the rim integral is dropped.
double mechanical_variation(const PlateField& u, const Vector& v, const Params& p, bool include_boundary = true);

/// Direction fields must vanish at r = 1; throws std::invalid_argument otherwise.
VariationCheck variation_test_mech(const PlateField& u, const Vector& v, const Params& p, double step = 1e-4,
                                   bool include_boundary = true);

/// Compares the central difference of electrostatic_energy with
/// (1/2) integral g(u) v dx. Throws TouchdownError if u +- step v touches down.
VariationCheck variation_test_elec(PotentialSolver& solver, const PlateField& u, const Vector& v,
                                   const Params& p, double step = 1e-4);

/// Compares the central difference of total_energy with
/// integral (A u + lambda g(u)) v dx plus the rim integral.
VariationCheck variation_test_total(PotentialSolver& solver, const PlateField& u, const Vector& v,
                                    const Params& p, double step = 1e-4);

}  // namespace mems
