#pragma once

#include <Eigen/Dense>

#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "mems/grid.hpp"
#include "mems/params.hpp"
#include "mems/plate.hpp"
#include "mems/potential.hpp"

namespace mems {

/// Source of the electrostatic load g(u) and its Jacobian.
class ForceModel {
 public:
  virtual ~ForceModel() = default;
  virtual TraceForce force(const PlateField& u, const Params& p) = 0;
  /// dg_i/du_j for i, j = 0..n-1 (u_n is pinned to zero).
  virtual Eigen::MatrixXd jacobian(const PlateField& u, const Params& p) = 0;
};

/// g from the transformed potential; Jacobian by central differences,
/// one column per node, step 1e-6 (1 + |u|_inf).
class FreeBoundaryForce : public ForceModel {
 public:
  explicit FreeBoundaryForce(std::shared_ptr<const CylinderGrid> grid) : solver_(std::move(grid)) {}

  TraceForce force(const PlateField& u, const Params& p) override;
  Eigen::MatrixXd jacobian(const PlateField& u, const Params& p) override;

  PotentialSolver& potential() { return solver_; }

 private:
  PotentialSolver solver_;
};

/// hybrid: Picard for at most picard_budget iterations, then Newton from
/// the last admissible iterate.
enum class Method { picard, newton, hybrid };

struct SolveOptions {
  Method method = Method::picard;
  double tol = 1e-10;
  int max_iter = 200;
  /// Picard relaxation u <- (1 - theta) u + theta T(u).
  double damping = 1.0;
  int picard_budget = 40;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  /// Last update size relative to 1 + |u|_inf; converged implies residual <= tol.
  double residual = std::numeric_limits<double>::infinity();
  PlateField solution;
  TraceForce force;
  /// Set when the iteration stopped because the plate touched down.
  bool touchdown = false;
};

/// A^{-1}(-lambda g(u)).
PlateField picard_step(ForceModel& model, const PlateOperator& plate, const PlateField& u, const Params& p);

/// Picard: iterate the fixed-point map, stop when
/// |u_{k+1} - u_k|_inf <= tol (1 + |u_k|_inf).
/// Newton: solve (A + lambda Dg(u)) d = -(A u + lambda g(u)), same stop test on d;
/// gives up after three iterations without halving the smallest |d| so far.
/// Never throws for non-convergence or touchdown; see converged/touchdown.
SolveReport solve_stationary(ForceModel& model, const PlateOperator& plate, const Params& p,
                             const PlateField& u0, const SolveOptions& opt = {});

struct MembershipReport {
  double rho = 0.0;
  double w23_norm = 0.0;
  double min_gap = 0.0;
  bool in_S = false;
};

/// (integral |u|^3 + |u_r|^3 + |Lap u|^3 + |u_rr|^3 dx)^(1/3) by disc quadrature.
double w23_norm(const PlateField& u);

/// Discrete surrogate for membership in S(rho):
/// (integral |u|^3 + |u_r|^3 + |Lap u|^3 + |u_rr|^3 dx)^(1/3) < 1/rho,
/// min u + 1 > rho and u(1) = 0.
MembershipReport membership(const PlateField& u, double rho);

/// Pointwise checks that every stationary solution must pass.
struct StationaryInvariants {
  double rim = 0.0;              // |u(1)|
  double steklov_residual = 0.0; // one-sided hinged residual
  double u_max = 0.0;
  double u_min = 0.0;
  double min_laplacian = 0.0;    // min over nodes of Lap u
  double min_force = 0.0;        // min g
  double min_dz_psi = 0.0;       // min d_z psi(., u); 0 when not computed
  double max_psi_excess = 0.0;   // max psi - (1 + z - u); 0 when not computed

  /// The sign conditions at pointwise tolerance tol; the Steklov residual
  /// is a truncation quantity and is compared against steklov_tol.
  bool ok(double tol, double steklov_tol) const;
};

/// Truncation-level bound for the one-sided Steklov residual of a discrete
/// solution: 2 h^2 (1 + |u|_inf).
double steklov_tolerance(const PlateField& u);

StationaryInvariants check_invariants(const PlateOperator& plate, const PlateField& u, const TraceForce& g,
                                      const PotentialField* phi = nullptr);

struct ContinuationRecord {
  double lambda = 0.0;
  double u_min = 0.0;
  int iterations = 0;
  bool converged = false;
  bool invariants_ok = true;
  PlateField solution;  // empty for failed records
};

struct ContinuationTrace {
  std::vector<ContinuationRecord> records;  // sorted by lambda
  double lambda_star = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = std::numeric_limits<double>::infinity();

  /// Converged records only, in increasing lambda.
  std::vector<const ContinuationRecord*> accepted() const;
};

struct ContinuationOptions {
  double dlambda0 = 0.1;
  /// The march stops once bracket_hi - bracket_lo <= width_ratio * dlambda0.
  double width_ratio = 1e-4;
  /// Upper limit on lambda; reaching it without a failure leaves bracket_hi infinite.
  double lambda_max = 1e6;
  SolveOptions solve{Method::hybrid, 1e-10, 20, 1.0, 40};
  /// Pointwise tolerance for the per-record invariant suite.
  double invariant_tol = 1e-6;
};

/// Natural-parameter continuation from lambda = 0 with warm starts and a
/// secant predictor. A failed step is halved; after the first failure the
/// march bisects between the last success and the nearest failure.
ContinuationTrace continue_in_lambda(ForceModel& model, const PlateOperator& plate, const Params& p,
                                     const ContinuationOptions& opt);

}  // namespace mems
