#include "mems/smallgap.hpp"

#include <fmt/format.h>

namespace mems {

SmallGapProblem::SmallGapProblem(Params p, std::shared_ptr<const RadialGrid> g) : params(p), grid(std::move(g)) {
  if (!grid) throw std::invalid_argument("SmallGapProblem: null grid");
  params.eps = 0.0;
}

Vector smallgap_rhs(const PlateField& u, double lambda) {
  const double umin = u.min();
  if (umin <= -1.0) throw TouchdownError(fmt::format("touchdown: min u = {:.17g}", umin));
  return -lambda * (1.0 + u.values.array()).square().inverse().matrix();
}

TraceForce SmallGapForce::force(const PlateField& u, const Params&) {
  return {u.grid, smallgap_rhs(u, -1.0)};
}

Eigen::MatrixXd SmallGapForce::jacobian(const PlateField& u, const Params&) {
  const int n = u.grid->n();
  const Vector d = -2.0 * (1.0 + u.values.head(n).array()).cube().inverse().matrix();
  return d.asDiagonal();
}

SolveReport solve_smallgap(const SmallGapProblem& pb, double lambda, const PlateField& u0, const SolveOptions& opt) {
  Params p = pb.params;
  p.lambda = lambda;
  const PlateOperator plate(p, pb.grid);
  SmallGapForce model;
  return solve_stationary(model, plate, p, u0, opt);
}

ContinuationTrace smallgap_fold(const SmallGapProblem& pb, const ContinuationOptions& opt) {
  const PlateOperator plate(pb.params, pb.grid);
  SmallGapForce model;
  return continue_in_lambda(model, plate, pb.params, opt);
}

}  // namespace mems
