#include "mems/plate.hpp"

#include <fmt/format.h>

#include <cmath>
#include <vector>

namespace mems {
namespace {

// Unknown layout: u_i -> 2i, v_i -> 2i + 1.
int iu(int i) { return 2 * i; }
int iv(int i) { return 2 * i + 1; }

// Coefficients of the radial Laplacian row i (i < n) on nodes i-1, i, i+1.
struct Stencil {
  double lo, mid, hi;
};

Stencil laplacian_row(const RadialGrid& g, int i) {
  const double h = g.h();
  const double h2 = h * h;
  if (i == 0) return {0.0, -4.0 / h2, 4.0 / h2};
  const double r = g.r(i);
  return {1.0 / h2 - 1.0 / (2.0 * h * r), -2.0 / h2, 1.0 / h2 + 1.0 / (2.0 * h * r)};
}

}  // namespace

PlateOperator::PlateOperator(const Params& p, std::shared_ptr<const RadialGrid> grid, double shift)
    : params_(p), grid_(std::move(grid)), shift_(shift) {
  if (!grid_) throw std::invalid_argument("PlateOperator: null grid");
  if (!(p.beta > 0.0) || !(p.tau >= 0.0) || !(p.sigma > -1.0 && p.sigma <= 1.0) || !(p.kappa >= 0.0)) {
    throw std::invalid_argument(
        fmt::format("PlateOperator: inadmissible parameters beta={} tau={} sigma={} kappa={}", p.beta,
                    p.tau, p.sigma, p.kappa));
  }
  const RadialGrid& g = *grid_;
  const int n = g.n();
  const int size = 2 * (n + 1);

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(8 * size);

  // v_i + (Lap u)_i = 0 and shift u_i - beta (Lap v)_i + tau v_i = f_i.
  for (int i = 0; i < n; ++i) {
    const Stencil s = laplacian_row(g, i);
    const int row_v = iu(i);
    const int row_f = iv(i);
    t.emplace_back(row_v, iv(i), 1.0);
    t.emplace_back(row_v, iu(i), s.mid);
    t.emplace_back(row_v, iu(i + 1), s.hi);
    if (i > 0) t.emplace_back(row_v, iu(i - 1), s.lo);

    t.emplace_back(row_f, iu(i), shift_);
    t.emplace_back(row_f, iv(i), -p.beta * s.mid + p.tau);
    t.emplace_back(row_f, iv(i + 1), -p.beta * s.hi);
    if (i > 0) t.emplace_back(row_f, iv(i - 1), -p.beta * s.lo);
  }
  // u_n = 0.
  t.emplace_back(iu(n), iu(n), 1.0);
  // v_n + (1 - sigma) kappa slope(u) = 0.
  const double c = (1.0 - p.sigma) * p.kappa * boundary_slope(Vector::Unit(n + 1, n));
  t.emplace_back(iv(n), iv(n), 1.0);
  t.emplace_back(iv(n), iu(n), c);
  t.emplace_back(iv(n), iu(n - 1), -c);

  system_.resize(size, size);
  system_.setFromTriplets(t.begin(), t.end());
  system_.makeCompressed();
  lu_.compute(system_);
  if (lu_.info() != Eigen::Success) {
    throw SolverError("PlateOperator: factorization failed (singular hinged plate system)");
  }
}

double PlateOperator::boundary_slope(const Vector& u) const {
  const RadialGrid& g = *grid_;
  const int n = g.n();
  const double h = g.h();
  // u'(1) - (h/2) u''(1) with u''(1) = ((1 - sigma) kappa - 1) u'(1).
  const double corr = 1.0 + 0.5 * h * (1.0 - (1.0 - params_.sigma) * params_.kappa);
  if (!(corr > 0.0)) throw std::invalid_argument("PlateOperator: grid too coarse for kappa");
  return (u[n] - u[n - 1]) / (h * corr);
}

Vector PlateOperator::moment(const Vector& u) const {
  const RadialGrid& g = *grid_;
  if (u.size() != g.size()) throw std::invalid_argument("PlateOperator::moment: grid mismatch");
  Vector v = -radial_laplacian(g, u);
  v[g.n()] = -(1.0 - params_.sigma) * params_.kappa * boundary_slope(u);
  return v;
}

Vector PlateOperator::apply(const PlateField& u) const {
  const RadialGrid& g = *grid_;
  if (u.values.size() != g.size() || (u.grid && u.grid->n() != g.n())) {
    throw std::invalid_argument("PlateOperator::apply: grid mismatch");
  }
  const int n = g.n();
  const Vector v = moment(u.values);
  Vector out = Vector::Zero(n + 1);
  for (int i = 0; i < n; ++i) {
    const Stencil s = laplacian_row(g, i);
    const double lap_v = s.mid * v[i] + s.hi * v[i + 1] + (i > 0 ? s.lo * v[i - 1] : 0.0);
    out[i] = shift_ * u.values[i] - params_.beta * lap_v + params_.tau * v[i];
  }
  return out;
}

PlateField PlateOperator::solve(const Vector& f) const {
  const RadialGrid& g = *grid_;
  const int n = g.n();
  if (f.size() != g.size() && f.size() != n) {
    throw std::invalid_argument("PlateOperator::solve: right-hand side has wrong length");
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * (n + 1));
  for (int i = 0; i < n; ++i) b[iv(i)] = f[i];
  Eigen::VectorXd x = lu_.solve(b);
  const double scale = std::max(b.norm(), 1e-300);
  Eigen::VectorXd r = b - system_ * x;
  if (r.norm() > 1e-12 * scale) {
    x += lu_.solve(r);
    r = b - system_ * x;
  }
  const double rel = b.norm() > 0.0 ? r.norm() / scale : r.norm();
  if (!(rel <= 1e-10) || !x.allFinite()) {
    throw SolverError(fmt::format("PlateOperator::solve: relative residual {:.3e}", rel));
  }
  Vector u(n + 1);
  for (int i = 0; i < n; ++i) u[i] = x[iu(i)];
  u[n] = 0.0;
  return {grid_, std::move(u)};
}

Eigen::MatrixXd PlateOperator::dense_matrix() const {
  const int n = grid_->n();
  Eigen::MatrixXd m(n, n);
  PlateField e = PlateField::zero(grid_);
  for (int j = 0; j < n; ++j) {
    e.values.setZero();
    e.values[j] = 1.0;
    m.col(j) = apply(e).head(n);
  }
  return m;
}

std::pair<double, double> check_hinged_bc(const PlateField& u, const Params& p) {
  const RadialGrid& g = *u.grid;
  const double du = boundary_normal_derivative(g, u.values);
  const double lap = boundary_laplacian(g, u.values);
  return {std::abs(u.rim()), std::abs(lap - (1.0 - p.sigma) * p.kappa * du)};
}

}  // namespace mems
