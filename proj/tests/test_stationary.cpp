#include <gtest/gtest.h>

#include <cmath>

#include "mems/spectrum.hpp"
#include "mems/stationary.hpp"
#include "support.hpp"

using namespace mems;
using mems::testing::bump;
using mems::testing::sup;

namespace {

Params params(double lambda, double eps = 0.1, double sigma = 0.0, double tau = 0.0) {
  Params p;
  p.lambda = lambda;
  p.eps = eps;
  p.sigma = sigma;
  p.tau = tau;
  return p;
}

struct Fixture {
  std::shared_ptr<const CylinderGrid> cg;
  FreeBoundaryForce model;
  PlateOperator plate;
  Fixture(int n, int m, const Params& p)
      : cg(std::make_shared<const CylinderGrid>(n, m)), model(cg), plate(p, cg->radial_ptr()) {}
  PlateField zero() const { return PlateField::zero(cg->radial_ptr()); }
};

}  // namespace

TEST(Stationary, ZeroVoltageGivesFlatPlate) {
  const Params p = params(0.0);
  Fixture s(32, 16, p);
  for (Method m : {Method::picard, Method::newton, Method::hybrid}) {
    const SolveReport rep = solve_stationary(s.model, s.plate, p, s.zero(), {m});
    EXPECT_TRUE(rep.converged);
    EXPECT_EQ(rep.iterations, 1);
    EXPECT_EQ(sup(rep.solution.values), 0.0);
  }
}

TEST(Stationary, FirstPicardStepFromFlatPlate) {
  const Params p = params(0.5);
  Fixture s(256, 16, p);
  const PlateField u1 = picard_step(s.model, s.plate, s.zero(), p);
  EXPECT_NEAR(u1.values[0], -5.0 * 0.5 / 64.0, 1e-5);
  EXPECT_EQ(u1.rim(), 0.0);
}

TEST(Stationary, ConvergedStateIsFixedPoint) {
  const Params p = params(0.5);
  Fixture s(32, 32, p);
  const SolveReport rep = solve_stationary(s.model, s.plate, p, s.zero());
  ASSERT_TRUE(rep.converged);
  EXPECT_LE(rep.residual, 1e-10);
  EXPECT_LE(sup(picard_step(s.model, s.plate, rep.solution, p).values - rep.solution.values), 1e-8);
  const double first = -5.0 * 0.5 / 64.0;
  EXPECT_LT(rep.solution.values[0], first);
  EXPECT_GT(rep.solution.values[0], 1.25 * first);
  EXPECT_LT(rep.iterations, 30);
}

TEST(Stationary, PicardAndNewtonAgree) {
  for (double sigma : {-0.5, 0.0, 0.5}) {
    const Params p = params(1.5, 0.1, sigma, 1.0);
    Fixture s(32, 16, p);
    const SolveReport a = solve_stationary(s.model, s.plate, p, s.zero(), {Method::picard});
    const SolveReport b = solve_stationary(s.model, s.plate, p, s.zero(), {Method::newton});
    ASSERT_TRUE(a.converged);
    ASSERT_TRUE(b.converged);
    EXPECT_LE(sup(a.solution.values - b.solution.values), 1e-7) << sigma;
    EXPECT_LT(b.iterations, a.iterations);
  }
}

TEST(Stationary, UniqueFromDifferentStartsAtSmallVoltage) {
  const Params p = params(0.3);
  Fixture s(32, 16, p);
  const auto g = s.cg->radial_ptr();
  const SolveReport a = solve_stationary(s.model, s.plate, p, s.zero());
  const SolveReport b = solve_stationary(s.model, s.plate, p, PlateField(g, bump(*g, -0.3)));
  ASSERT_TRUE(a.converged && b.converged);
  EXPECT_LE(sup(a.solution.values - b.solution.values), 1e-8);
}

TEST(Stationary, DampedPicardConverges) {
  const Params p = params(1.0);
  Fixture s(32, 16, p);
  const SolveReport full = solve_stationary(s.model, s.plate, p, s.zero());
  const SolveReport half = solve_stationary(s.model, s.plate, p, s.zero(), {Method::picard, 1e-10, 400, 0.5});
  ASSERT_TRUE(full.converged && half.converged);
  EXPECT_LE(sup(full.solution.values - half.solution.values), 1e-7);
}

TEST(Stationary, Invariants) {
  const Params p = params(0.5);
  Fixture s(32, 32, p);
  const SolveReport rep = solve_stationary(s.model, s.plate, p, s.zero());
  ASSERT_TRUE(rep.converged);
  const PotentialField phi = s.model.potential().solve(rep.solution, p);
  const StationaryInvariants inv = check_invariants(s.plate, rep.solution, rep.force, &phi);
  EXPECT_EQ(inv.rim, 0.0);
  EXPECT_LE(inv.steklov_residual, steklov_tolerance(rep.solution));
  EXPECT_LE(inv.u_max, 0.0);
  EXPECT_GT(inv.u_min, -1.0);
  EXPECT_GE(inv.min_laplacian, -1e-6);
  EXPECT_GT(inv.min_force, 0.0);
  EXPECT_GT(inv.min_dz_psi, 0.0);
  EXPECT_LE(inv.max_psi_excess, 1e-6);
  EXPECT_TRUE(inv.ok(1e-6, steklov_tolerance(rep.solution)));
}

TEST(Membership, Examples) {
  const auto g = mems::testing::radial(64);
  EXPECT_TRUE(membership(PlateField::zero(g), 0.5).in_S);
  EXPECT_EQ(membership(PlateField::zero(g), 0.5).w23_norm, 0.0);
  EXPECT_FALSE(membership(PlateField(g, bump(*g, -0.95)), 0.1).in_S);
  EXPECT_TRUE(membership(PlateField(g, bump(*g, -0.1)), 0.1).in_S);
  EXPECT_FALSE(membership(PlateField(g, bump(*g, 5.0)), 0.1).in_S);
  Vector off = bump(*g, -0.1);
  off[g->n()] = 1e-6;
  EXPECT_FALSE(membership(PlateField(g, off), 0.1).in_S);
  const double a = w23_norm(PlateField(g, bump(*g, 0.2)));
  EXPECT_NEAR(w23_norm(PlateField(g, bump(*g, -0.4))), 2.0 * a, 1e-12);
}

TEST(Continuation, FoldBelowPrincipalEigenvalue) {
  const Params p = params(0.0);
  Fixture s(32, 16, p);
  ContinuationOptions opt;
  opt.dlambda0 = 0.5;
  const ContinuationTrace tr = continue_in_lambda(s.model, s.plate, p, opt);
  const double mu1 = principal_eigenpair(s.plate).mu1;
  ASSERT_TRUE(std::isfinite(tr.bracket_hi));
  EXPECT_LE(tr.bracket_hi - tr.bracket_lo, 1e-4 * opt.dlambda0 * (1 + 1e-9));
  EXPECT_GT(tr.lambda_star, 0.0);
  EXPECT_LT(tr.lambda_star, mu1);
  EXPECT_NEAR(tr.lambda_star, 2.675, 0.05);
  const auto acc = tr.accepted();
  ASSERT_GE(acc.size(), 5u);
  for (std::size_t k = 1; k < acc.size(); ++k) {
    EXPECT_GT(acc[k]->lambda, acc[k - 1]->lambda);
    EXPECT_LE(acc[k]->u_min, acc[k - 1]->u_min);
    EXPECT_TRUE(acc[k]->invariants_ok);
  }
  for (const auto& r : tr.records) {
    if (r.converged && r.lambda <= 0.5 * tr.lambda_star) {
      EXPECT_LE(r.iterations, 30) << r.lambda;
    }
  }
}

TEST(Stationary, NoSolutionAbovePrincipalEigenvalue) {
  const Params p0 = params(0.0);
  Fixture s(32, 16, p0);
  const double mu1 = principal_eigenpair(s.plate).mu1;
  const Params p = params(1.05 * mu1);
  for (Method m : {Method::picard, Method::newton, Method::hybrid}) {
    const SolveReport rep = solve_stationary(s.model, s.plate, p, s.zero(), {m, 1e-10, 100});
    EXPECT_FALSE(rep.converged);
  }
}
