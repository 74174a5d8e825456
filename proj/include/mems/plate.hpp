#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <memory>
#include <utility>

#include "mems/grid.hpp"
#include "mems/params.hpp"

namespace mems {

/// Plate deflection u at the radial nodes, in units of the gap height.
struct PlateField {
  std::shared_ptr<const RadialGrid> grid;
  Vector values;

  PlateField() = default;
  PlateField(std::shared_ptr<const RadialGrid> g, Vector v) : grid(std::move(g)), values(std::move(v)) {}

  static PlateField zero(std::shared_ptr<const RadialGrid> g) {
    const int size = g->size();
    return {std::move(g), Vector::Zero(size)};
  }
  template <class F>
  static PlateField from(std::shared_ptr<const RadialGrid> g, F&& f) {
    Vector v = sample(*g, f);
    return {std::move(g), std::move(v)};
  }

  double min() const { return values.minCoeff(); }
  double rim() const { return values[values.size() - 1]; }
};

/// The hinged plate operator A u = beta Lap^2 u - tau Lap u with
/// u = 0 and Lap u - (1 - sigma) kappa u_r = 0 at r = 1, optionally shifted
/// to (shift I + A) for implicit time stepping.
///
/// The operator is assembled as a coupled system in (u, v), v = -Lap u,
/// interleaved node by node, and factored once. The rim row reads
///   v_n = -(1 - sigma) kappa * boundary_slope(u),
/// where boundary_slope is a two-point difference corrected with the
/// hinged condition itself; with this row the discrete A is exactly
/// self-adjoint in the inner product of integrate_disc.
///
/// sigma = 1 (Navier conditions) is accepted as a limiting case.
class PlateOperator {
 public:
  PlateOperator(const Params& p, std::shared_ptr<const RadialGrid> grid, double shift = 0.0);

  const Params& params() const { return params_; }
  const RadialGrid& grid() const { return *grid_; }
  const std::shared_ptr<const RadialGrid>& grid_ptr() const { return grid_; }
  double shift() const { return shift_; }

  /// (shift I + A) u at the nodes 0..n-1; the rim entry is 0.
  Vector apply(const PlateField& u) const;

  /// Solves (shift I + A) u = f; only f_0..f_{n-1} are read. Safe to call
  /// concurrently on one operator.
  PlateField solve(const Vector& f) const;

  /// Dense matrix of (shift I + A) acting on u_0..u_{n-1} (u_n = 0).
  Eigen::MatrixXd dense_matrix() const;

  /// Slope estimate used in the rim row.
  double boundary_slope(const Vector& u) const;

  /// v = -Lap u at every node, with the rim value taken from the hinged row.
  Vector moment(const Vector& u) const;


 private:
  Params params_;
  std::shared_ptr<const RadialGrid> grid_;
  double shift_;
  Eigen::SparseMatrix<double> system_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

/// (|u(1)|, |Lap u(1) - (1 - sigma) kappa u'(1)|) from one-sided stencils.
std::pair<double, double> check_hinged_bc(const PlateField& u, const Params& p);

}  // namespace mems
