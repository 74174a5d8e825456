#include "mems/energy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mems {
namespace {

void require_rim_zero(const Vector& v) {
  if (std::abs(v[v.size() - 1]) > 1e-14) {
    throw std::invalid_argument("variation direction must vanish at r = 1");
  }
}

PlateField shifted(const PlateField& u, const Vector& v, double s) { return {u.grid, u.values + s * v}; }

}  // namespace

MechanicalEnergy mechanical_energy(const PlateField& u, const Params& p) {
  const RadialGrid& g = *u.grid;
  const Vector urr = radial_second_derivative(g, u.values);
  const Vector ur = radial_derivative(g, u.values);
  Vector bend(g.size());
  Vector hess(g.size());
  Vector stretch(g.size());
  for (int i = 0; i <= g.n(); ++i) {
    const double a = urr[i];
    const double b = i == 0 ? urr[0] : ur[i] / g.r(i);
    bend[i] = 0.5 * (a * a + b * b) + p.sigma * a * b;
    hess[i] = a * a + b * b;
    stretch[i] = ur[i] * ur[i];
  }
  const double value = p.beta * integrate_disc(g, bend) + 0.5 * p.tau * integrate_disc(g, stretch);
  const double lower = 0.5 * p.beta * (1.0 - std::abs(p.sigma)) * integrate_disc(g, hess);
  return {value, lower};
}

double electrostatic_energy(const PotentialField& phi, const Params& p) {
  const CylinderGrid& cg = *phi.grid;
  const RadialGrid& g = cg.radial();
  const int n = g.n();
  const int m = cg.m();
  const double k = cg.k();
  const double e2 = p.eps * p.eps;
  const Vector& u = phi.source.values;
  const Vector ur = radial_derivative(g, u);

  // phi_r along every eta row.
  Eigen::MatrixXd phi_r(n + 1, m + 1);
  for (int j = 0; j <= m; ++j) phi_r.col(j) = radial_derivative(g, phi.values.col(j));

  Vector column(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double gap = 1.0 + u[i];
    double acc = 0.0;
    for (int j = 0; j <= m; ++j) {
      double phi_eta;
      if (j == 0) {
        phi_eta = (-3.0 * phi.values(i, 0) + 4.0 * phi.values(i, 1) - phi.values(i, 2)) / (2.0 * k);
      } else if (j == m) {
        phi_eta = (3.0 * phi.values(i, m) - 4.0 * phi.values(i, m - 1) + phi.values(i, m - 2)) / (2.0 * k);
      } else {
        phi_eta = (phi.values(i, j + 1) - phi.values(i, j - 1)) / (2.0 * k);
      }
      const double dz = phi_eta / gap;
      const double dr = phi_r(i, j) - cg.eta(j) * ur[i] * dz;
      acc += cg.eta_weights()[j] * (e2 * dr * dr + dz * dz);
    }
    column[i] = gap * acc;
  }
  return -0.5 * integrate_disc(g, column);
}

EnergyReport total_energy(const PotentialField& phi, const Params& p) {
  const MechanicalEnergy mech = mechanical_energy(phi.source, p);
  EnergyReport r;
  r.e_mech = mech.value;
  r.bending_lower_bound = mech.lower_bound;
  r.e_elec = electrostatic_energy(phi, p);
  r.e_total = r.e_mech + 2.0 * p.lambda * r.e_elec;
  return r;
}

double mechanical_variation(const PlateField& u, const Vector& v, const Params& p, bool include_boundary) {
  const RadialGrid& g = *u.grid;
  const Vector lap = radial_laplacian(g, u.values);
  const Vector bilap = radial_laplacian(g, lap);
  Vector integrand = (p.beta * bilap - p.tau * lap).cwiseProduct(v);
  integrand[g.n()] = 0.0;  // v(1) = 0
  double out = integrate_disc(g, integrand);
  if (include_boundary) {
    const double moment = lap[g.n()] - (1.0 - p.sigma) * p.kappa * boundary_normal_derivative(g, u.values);
    out += p.beta * moment * 2.0 * std::numbers::pi * boundary_normal_derivative(g, v);
  }
  return out;
}

VariationCheck variation_test_mech(const PlateField& u, const Vector& v, const Params& p, double step,
                                   bool include_boundary) {
  require_rim_zero(v);
  VariationCheck c;
  if (v.isZero(0.0)) return c;
  const double ep = mechanical_energy(shifted(u, v, step), p).value;
  const double em = mechanical_energy(shifted(u, v, -step), p).value;
  c.fd = (ep - em) / (2.0 * step);
  c.formula = mechanical_variation(u, v, p, include_boundary);
  c.defect = std::abs(c.fd - c.formula);
  return c;
}

VariationCheck variation_test_elec(PotentialSolver& solver, const PlateField& u, const Vector& v,
                                   const Params& p, double step) {
  require_rim_zero(v);
  VariationCheck c;
  if (v.isZero(0.0)) return c;
  const double ep = electrostatic_energy(solver.solve(shifted(u, v, step), p), p);
  const double em = electrostatic_energy(solver.solve(shifted(u, v, -step), p), p);
  c.fd = (ep - em) / (2.0 * step);
  const TraceForce gu = trace_force(solver.solve(u, p), p);
  Vector integrand = gu.values.cwiseProduct(v);
  c.formula = 0.5 * integrate_disc(*u.grid, integrand);
  c.defect = std::abs(c.fd - c.formula);
  return c;
}

VariationCheck variation_test_total(PotentialSolver& solver, const PlateField& u, const Vector& v,
                                    const Params& p, double step) {
  require_rim_zero(v);
  VariationCheck c;
  if (v.isZero(0.0)) return c;
  const double ep = total_energy(solver.solve(shifted(u, v, step), p), p).e_total;
  const double em = total_energy(solver.solve(shifted(u, v, -step), p), p).e_total;
  c.fd = (ep - em) / (2.0 * step);
  const TraceForce gu = trace_force(solver.solve(u, p), p);
  c.formula = mechanical_variation(u, v, p, true) + p.lambda * integrate_disc(*u.grid, gu.values.cwiseProduct(v));
  c.defect = std::abs(c.fd - c.formula);
  return c;
}

}  // namespace mems
