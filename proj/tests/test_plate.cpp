#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mems/plate.hpp"
#include "support.hpp"

using namespace mems;
using mems::testing::radial;
using mems::testing::sup;

namespace {

Params plate_params(double sigma, double tau = 0.0) {
  Params p;
  p.beta = 1.0;
  p.tau = tau;
  p.sigma = sigma;
  p.kappa = 1.0;
  return p;
}

double center_under_unit_load(double sigma, int n) {
  const auto g = radial(n);
  const PlateOperator a(plate_params(sigma), g);
  return a.solve(-Vector::Ones(g->size())).values[0];
}

}  // namespace

TEST(PlateSolve, SteklovClosedForm) { EXPECT_NEAR(center_under_unit_load(0.0, 256), -5.0 / 64.0, 1e-5); }

TEST(PlateSolve, NavierClosedForm) { EXPECT_NEAR(center_under_unit_load(1.0, 256), -3.0 / 64.0, 1e-5); }

TEST(PlateSolve, ClosedFormConvergesAtSecondOrder) {
  const double e1 = std::abs(center_under_unit_load(0.0, 32) + 5.0 / 64.0);
  const double e2 = std::abs(center_under_unit_load(0.0, 64) + 5.0 / 64.0);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.2);
}

TEST(PlateSolve, ZeroLoadGivesZero) {
  const auto g = radial(32);
  const PlateOperator a(plate_params(0.3), g);
  EXPECT_EQ(sup(a.solve(Vector::Zero(g->size())).values), 0.0);
}

TEST(PlateSolve, RimIsExactlyZero) {
  const auto g = radial(50);
  const PlateOperator a(plate_params(-0.4, 2.0), g);
  EXPECT_EQ(a.solve(-Vector::Ones(g->size())).rim(), 0.0);
}

TEST(PlateOperator, RejectsInadmissibleParameters) {
  const auto g = radial(16);
  EXPECT_THROW(PlateOperator(plate_params(1.5), g), std::invalid_argument);
  EXPECT_THROW(PlateOperator(plate_params(-1.0), g), std::invalid_argument);
  Params p = plate_params(0.0);
  p.beta = 0.0;
  EXPECT_THROW(PlateOperator(p, g), std::invalid_argument);
  p = plate_params(0.0, -1.0);
  EXPECT_THROW(PlateOperator(p, g), std::invalid_argument);
  EXPECT_NO_THROW(PlateOperator(plate_params(1.0), g));
}

TEST(PlateApply, ZeroGivesZero) {
  const auto g = radial(32);
  const PlateOperator a(plate_params(0.0, 1.0), g);
  EXPECT_EQ(sup(a.apply(PlateField::zero(g))), 0.0);
}

TEST(PlateApply, ParaboloidAwayFromTheRim) {
  // The node next to the rim sees the boundary moment, which 1 - r^2 does
  // not satisfy; further in, -Lap u = 4 is constant.
  const auto g = radial(64);
  const PlateField u = PlateField::from(g, [](double r) { return 1.0 - r * r; });
  const Vector a1 = PlateOperator(plate_params(0.0, 1.0), g).apply(u);
  const Vector a0 = PlateOperator(plate_params(0.0, 0.0), g).apply(u);
  for (int i = 0; i < g->n() - 1; ++i) {
    EXPECT_NEAR(a1[i], 4.0, 1e-8) << i;
    EXPECT_NEAR(a0[i], 0.0, 1e-8) << i;
  }
}

TEST(PlateApply, SolveInvertsApply) {
  std::mt19937_64 rng(3);
  for (double sigma : {-0.5, 0.0, 0.5, 1.0}) {
    const auto g = radial(48);
    const PlateOperator a(plate_params(sigma, 1.5), g);
    for (int k = 0; k < 5; ++k) {
      PlateField u(g, mems::testing::random_direction(*g, rng));
      const PlateField back = a.solve(a.apply(u));
      EXPECT_LE(sup(back.values - u.values), 1e-8 * (1.0 + sup(u.values)));
    }
  }
}

TEST(PlateApply, SelfAdjointInDiscQuadrature) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise;
  for (double sigma : {-0.7, 0.0, 0.6, 1.0}) {
    const auto g = radial(40);
    const PlateOperator a(plate_params(sigma, 2.0), g);
    for (int k = 0; k < 10; ++k) {
      Vector uv = mems::testing::random_direction(*g, rng);
      Vector wv = Vector::NullaryExpr(g->size(), [&](Eigen::Index) { return noise(rng); });
      wv[g->n()] = 0.0;
      const PlateField u(g, uv), w(g, wv);
      const double lhs = inner_disc(*g, a.apply(u), wv);
      const double rhs = inner_disc(*g, uv, a.apply(w));
      const double nu = std::sqrt(inner_disc(*g, uv, uv)), nw = std::sqrt(inner_disc(*g, wv, wv));
      EXPECT_LE(std::abs(lhs - rhs), 1e-8 * nu * nw) << sigma;
    }
  }
}

TEST(PlateApply, DenseMatrixMatchesApply) {
  const auto g = radial(20);
  const PlateOperator a(plate_params(0.2, 1.0), g, 3.0);
  const Eigen::MatrixXd m = a.dense_matrix();
  std::mt19937_64 rng(5);
  const PlateField u(g, mems::testing::random_direction(*g, rng));
  EXPECT_LE(sup(m * u.values.head(20) - a.apply(u).head(20)), 1e-8 * sup(a.apply(u)));
}

TEST(PlateSolve, SignPreservation) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> load(0.0, 1.0);
  for (double sigma : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
    for (double tau : {0.0, 5.0}) {
      const auto g = radial(64);
      const PlateOperator a(plate_params(sigma, tau), g);
      for (int k = 0; k < 10; ++k) {
        Vector f = Vector::NullaryExpr(g->size(), [&](Eigen::Index) { return -load(rng); });
        if (k % 2 == 0) f.head(g->n() / 2).setZero();
        const PlateField u = a.solve(f);
        EXPECT_LT(u.values.head(g->n()).maxCoeff(), 0.0);
        EXPECT_GT(boundary_normal_derivative(*g, u.values), 0.0);
      }
    }
  }
}

TEST(HingedResidual, Examples) {
  const auto g = radial(32);
  const PlateField q = PlateField::from(g, [](double r) { return 1.0 - r * r; });
  const auto [rim, steklov] = check_hinged_bc(q, plate_params(1.0));
  EXPECT_EQ(rim, 0.0);
  EXPECT_NEAR(steklov, 4.0, 1e-9);
  const auto [r0, s0] = check_hinged_bc(PlateField::zero(g), plate_params(0.0));
  EXPECT_EQ(r0, 0.0);
  EXPECT_EQ(s0, 0.0);
}

TEST(HingedResidual, SolveOutputResidualIsSecondOrder) {
  // The rim row is a second-order discretisation of the hinged condition,
  // so the one-sided residual of solver output is a truncation quantity.
  std::vector<double> res;
  for (int n : {64, 128, 256}) {
    const auto g = radial(n);
    const Params p = plate_params(0.0);
    const PlateField u = PlateOperator(p, g).solve(-Vector::Ones(g->size()));
    const auto [rim, steklov] = check_hinged_bc(u, p);
    EXPECT_EQ(rim, 0.0);
    EXPECT_LE(steklov, 2.0 * g->h() * g->h());
    res.push_back(steklov);
  }
  EXPECT_NEAR(std::log2(res[0] / res[1]), 2.0, 0.25);
  EXPECT_NEAR(std::log2(res[1] / res[2]), 2.0, 0.25);
}

TEST(PlateOperator, ShiftedOperator) {
  const auto g = radial(32);
  const PlateOperator plain(plate_params(0.0), g);
  const PlateOperator shifted(plate_params(0.0), g, 10.0);
  std::mt19937_64 rng(8);
  const PlateField u(g, mems::testing::random_direction(*g, rng));
  EXPECT_LE(sup(shifted.apply(u) - plain.apply(u) - 10.0 * u.values.head(33).cwiseProduct(
                                                           (Vector::Ones(33) - Vector::Unit(33, 32)))),
            1e-8 * sup(plain.apply(u)));
}
