#include "mems/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace mems {
namespace {

double w_inner(const RadialGrid& g, const Vector& a, const Vector& b) { return inner_disc(g, a, b); }

EigenPair inverse_iteration(const PlateOperator& plate, Vector w, const EigenPair* deflate,
                            const SpectralOptions& opt) {
  if (plate.shift() != 0.0) throw std::invalid_argument("principal_eigenpair: shifted operator");
  const auto grid = plate.grid_ptr();
  const RadialGrid& g = *grid;
  const int n = g.n();
  auto project = [&](Vector& v) {
    if (!deflate) return;
    const Vector& f = deflate->phi1.values;
    v -= (w_inner(g, v, f) / w_inner(g, f, f)) * f;
  };

  EigenPair out;
  project(w);
  w /= w.cwiseAbs().maxCoeff();
  double mu = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= opt.max_iter; ++k) {
    Vector next = plate.solve(w).values;
    project(next);
    // <w, w> / <w, A^{-1} w> is the Rayleigh quotient of A^{-1/2} w.
    const double mu_new = w_inner(g, w, w) / w_inner(g, w, next);
    const int imax = [&] {
      int i;
      next.cwiseAbs().maxCoeff(&i);
      return i;
    }();
    w = next / next[imax];
    out.iterations = k;
    const bool done = std::abs(mu_new - mu) <= opt.tol * std::abs(mu_new);
    mu = mu_new;
    if (done) {
      out.converged = true;
      break;
    }
  }
  out.phi1 = PlateField(grid, w);
  out.mu1 = rayleigh_quotient(plate, out.phi1);
  const Vector aw = plate.apply(out.phi1);
  out.residual = (aw.head(n) - out.mu1 * w.head(n)).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace

double rayleigh_quotient(const PlateOperator& plate, const PlateField& w) {
  const RadialGrid& g = plate.grid();
  return w_inner(g, plate.apply(w), w.values) / w_inner(g, w.values, w.values);
}

EigenPair principal_eigenpair(const PlateOperator& plate, const SpectralOptions& opt) {
  const Vector start = sample(plate.grid(), [](double r) { return 1.0 - r * r; });
  return inverse_iteration(plate, start, nullptr, opt);
}

EigenPair principal_eigenpair(const Params& p, std::shared_ptr<const RadialGrid> grid, const SpectralOptions& opt) {
  const PlateOperator plate(p, std::move(grid));
  return principal_eigenpair(plate, opt);
}

EigenPair second_eigenpair(const PlateOperator& plate, const EigenPair& first, const SpectralOptions& opt) {
  const Vector start = sample(plate.grid(), [](double r) { return (1.0 - r * r) * (0.3 - r * r); });
  return inverse_iteration(plate, start, &first, opt);
}

StabilityReport linearized_spectral_bound(ForceModel& model, const PlateOperator& plate, const Params& p,
                                          const PlateField& u) {
  Eigen::MatrixXd j = plate.dense_matrix();
  if (p.lambda != 0.0) j += p.lambda * model.jacobian(u, p);
  Eigen::EigenSolver<Eigen::MatrixXd> es(j, false);
  if (es.info() != Eigen::Success) throw SolverError("linearized_spectral_bound: eigenvalue solve failed");
  StabilityReport rep;
  rep.lambda = p.lambda;
  rep.min_real_part = es.eigenvalues().real().minCoeff();
  rep.stable = rep.min_real_part > 0.0;
  return rep;
}

CertificateReport nonexistence_certificate(const PlateOperator& plate, const Params& p, const EigenPair& eig,
                                           const PlateField& u, double slack) {
  const RadialGrid& g = plate.grid();
  const Vector& f = eig.phi1.values;
  const Vector au = plate.apply(u);
  CertificateReport rep;
  const double mass = integrate_disc(g, f);
  rep.load = p.lambda * mass;
  rep.work = -w_inner(g, au, f);
  rep.projected = -eig.mu1 * w_inner(g, f, u.values);
  rep.bound = eig.mu1 * mass;
  const double scale = std::max({std::abs(rep.load), std::abs(rep.work), std::abs(rep.projected), 1e-300});
  rep.load_le_work = rep.load <= rep.work + slack * scale;
  rep.work_eq_projected = std::abs(rep.work - rep.projected) <= slack * scale;
  rep.projected_lt_bound = rep.projected < rep.bound;
  return rep;
}

}  // namespace mems
