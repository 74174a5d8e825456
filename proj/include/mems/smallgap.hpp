#pragma once

#include <memory>

#include "mems/stationary.hpp"

namespace mems {

/// The eps = 0 limit: beta Lap^2 u - tau Lap u = -lambda/(1 + u)^2, hinged.
struct SmallGapProblem {
  Params params;
  std::shared_ptr<const RadialGrid> grid;

  /// Copies p with eps forced to 0.
  SmallGapProblem(Params p, std::shared_ptr<const RadialGrid> g);
};

/// -lambda/(1 + u)^2 at every node. Throws TouchdownError if min u <= -1.
Vector smallgap_rhs(const PlateField& u, double lambda);

/// g(u) = 1/(1 + u)^2 with the diagonal Jacobian -2/(1 + u)^3.
class SmallGapForce : public ForceModel {
 public:
  TraceForce force(const PlateField& u, const Params& p) override;
  Eigen::MatrixXd jacobian(const PlateField& u, const Params& p) override;
};

SolveReport solve_smallgap(const SmallGapProblem& pb, double lambda, const PlateField& u0, const SolveOptions& opt = {});

ContinuationTrace smallgap_fold(const SmallGapProblem& pb, const ContinuationOptions& opt);

}  // namespace mems
