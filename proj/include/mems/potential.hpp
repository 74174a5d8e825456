#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "mems/grid.hpp"
#include "mems/params.hpp"
#include "mems/plate.hpp"

namespace mems {

/// Transformed potential phi(r_i, eta_j) = psi(r_i, (1 + u_i) eta_j - 1),
/// stored as an (n+1) x (m+1) matrix.
struct PotentialField {
  std::shared_ptr<const CylinderGrid> grid;
  Eigen::MatrixXd values;
  PlateField source;
};

/// Squared field strength on the deflected plate,
/// g = eps^2 |grad' psi(., u)|^2 + (d_z psi(., u))^2.
struct TraceForce {
  std::shared_ptr<const RadialGrid> grid;
  Vector values;
};

/// Values of psi on the boundary of Omega(u), as a function of (r, z).
using BoundaryData = std::function<double(double r, double z)>;

/// Solver for the electrostatic problem mapped to the fixed cylinder.
///
/// With eta = (1 + z)/(1 + u(r)) the equation eps^2 Lap' psi + psi_zz = 0
/// becomes, after multiplication by (1 + u)^2,
///
///   eps^2 (1+u)^2 (phi_rr + phi_r / r) - 2 eps^2 eta (1+u) u_r phi_{r eta}
///     + (1 + eps^2 eta^2 u_r^2) phi_{eta eta}
///     + eps^2 eta (2 u_r^2 - (1+u) Lap u) phi_eta = 0,
///
/// discretised with centred differences (9-point with the cross term) and
/// phi_r = 0 on the axis. The sparsity pattern is fixed by the grid, so
/// the symbolic factorisation is computed once per solver instance.
///
/// Not thread-safe: use one instance per thread.
class PotentialSolver {
 public:
  explicit PotentialSolver(std::shared_ptr<const CylinderGrid> grid);

  const CylinderGrid& grid() const { return *grid_; }
  const std::shared_ptr<const CylinderGrid>& grid_ptr() const { return grid_; }

  /// Solves with the model boundary data psi = (1 + z)/(1 + u) on the
  /// boundary of Omega(u), i.e. phi = eta on the cylinder boundary.
  /// With require_conforming = false the check u(1) = 0 is skipped
  /// (potential-only use with e.g. constant u).
  /// Throws TouchdownError if min u <= -1 + 1e-12.
  PotentialField solve(const PlateField& u, const Params& p, bool require_conforming = true);

  /// Solves the same operator with arbitrary Dirichlet data psi = data(r, z)
  /// on the bottom (z = -1), top (z = u(r)) and side (r = 1) boundaries.
  PotentialField solve_dirichlet(const PlateField& u, const Params& p, const BoundaryData& data);

 private:
  int index(int i, int j) const;
  void check_source(const PlateField& u, bool require_conforming) const;

  std::shared_ptr<const CylinderGrid> grid_;
  Eigen::SparseMatrix<double> matrix_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

/// One-shot convenience wrapper around PotentialSolver.
PotentialField solve_potential(std::shared_ptr<const CylinderGrid> grid, const PlateField& u, const Params& p,
                               bool require_conforming = true);

/// d_z psi(r, u(r)) = phi_eta(r, 1)/(1 + u), one-sided second order in eta.
Vector vertical_field(const PotentialField& phi);

/// g(u) from the chain rule at eta = 1.
TraceForce trace_force(const PotentialField& phi, const Params& p);

struct MaxPrincipleReport {
  double sup_excess;     // max over grid of psi - (1 + z - u)
  double inf_dz_psi;     // min over plate nodes of d_z psi(., u)
};

MaxPrincipleReport check_max_principle(const PotentialField& phi);

/// Max over plate nodes of |grad' psi(., u) + u_r d_z psi(., u)|, with the
/// tangential derivative phi_r at the plate extrapolated from the two rows
/// below it so that the identity is tested rather than assumed.
double boundary_gradient_identity(const PotentialField& phi);

/// Manufactured solution psi = J0(k r) sinh(eps k (1 + z)) imposed as
/// Dirichlet data on Omega(u) for u = amp (1 - r^2); max nodal error on an
/// n x n cylinder grid.
double mms_error(int n, double eps, double k = 3.0, double amp = 0.3);

struct MmsRow {
  int n;
  double error;
  double order;  // observed order against the previous row; NaN on the first row
};

std::vector<MmsRow> mms_study(const std::vector<int>& levels, double eps, double k = 3.0, double amp = 0.3);

/// Writes columns r,eta,phi.
void write_potential_csv(std::ostream& out, const PotentialField& phi);

}  // namespace mems
