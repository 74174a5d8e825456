#include "mems/stationary.hpp"

#include <algorithm>
#include <cmath>

namespace mems {
namespace {

double sup_norm(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

bool admissible(const Vector& u) { return u.allFinite() && u.minCoeff() > -1.0 + 1e-12; }

}  // namespace

TraceForce FreeBoundaryForce::force(const PlateField& u, const Params& p) {
  return trace_force(solver_.solve(u, p), p);
}

Eigen::MatrixXd FreeBoundaryForce::jacobian(const PlateField& u, const Params& p) {
  const int n = u.grid->n();
  const double step = 1e-6 * (1.0 + sup_norm(u.values));
  Eigen::MatrixXd jac(n, n);
  PlateField w = u;
  for (int j = 0; j < n; ++j) {
    w.values[j] = u.values[j] + step;
    const Vector gp = force(w, p).values;
    w.values[j] = u.values[j] - step;
    const Vector gm = force(w, p).values;
    w.values[j] = u.values[j];
    jac.col(j) = (gp - gm).head(n) / (2.0 * step);
  }
  return jac;
}

PlateField picard_step(ForceModel& model, const PlateOperator& plate, const PlateField& u, const Params& p) {
  if (p.lambda == 0.0) return PlateField::zero(u.grid);
  const TraceForce g = model.force(u, p);
  return plate.solve(-p.lambda * g.values);
}

namespace {

void picard_loop(ForceModel& model, const PlateOperator& plate, const Params& p, const SolveOptions& opt,
                 int max_iter, SolveReport& rep) {
  PlateField& u = rep.solution;
  for (int k = 1; k <= max_iter; ++k) {
    PlateField next = picard_step(model, plate, u, p);
    if (opt.damping < 1.0) next.values = (1.0 - opt.damping) * u.values + opt.damping * next.values;
    ++rep.iterations;
    rep.residual = sup_norm(next.values - u.values) / (1.0 + sup_norm(u.values));
    if (!admissible(next.values)) {
      rep.touchdown = true;
      return;
    }
    u = std::move(next);
    if (rep.residual <= opt.tol) {
      rep.converged = true;
      return;
    }
  }
}

void newton_loop(ForceModel& model, const PlateOperator& plate, const Params& p, const SolveOptions& opt,
                 SolveReport& rep) {
  PlateField& u = rep.solution;
  const int n = plate.grid().n();
  const Eigen::MatrixXd a = plate.dense_matrix();
  double best = std::numeric_limits<double>::infinity();
  int stall = 0;
  for (int k = 1; k <= opt.max_iter; ++k) {
    ++rep.iterations;
    const TraceForce g = model.force(u, p);
    const Vector res = plate.apply(u).head(n) + p.lambda * g.values.head(n);
    Eigen::MatrixXd jac = a;
    if (p.lambda != 0.0) jac += p.lambda * model.jacobian(u, p);
    const Vector delta = jac.partialPivLu().solve(-res);
    if (!delta.allFinite()) return;
    rep.residual = sup_norm(delta) / (1.0 + sup_norm(u.values));
    // Backtrack only to stay inside the admissible set.
    double t = 1.0;
    Vector trial = u.values;
    for (int b = 0; b < 20; ++b) {
      trial.head(n) = u.values.head(n) + t * delta;
      if (admissible(trial)) break;
      t *= 0.5;
    }
    if (!admissible(trial)) {
      rep.touchdown = true;
      return;
    }
    u.values = trial;
    if (t == 1.0 && rep.residual <= opt.tol) {
      rep.converged = true;
      return;
    }
    stall = rep.residual < 0.5 * best ? 0 : stall + 1;
    if (stall >= 3) return;
    best = std::min(best, rep.residual);
  }
}

}  // namespace

SolveReport solve_stationary(ForceModel& model, const PlateOperator& plate, const Params& p, const PlateField& u0,
                             const SolveOptions& opt) {
  if (u0.values.size() != plate.grid().size()) throw std::invalid_argument("solve_stationary: wrong field size");
  if (!(opt.damping > 0.0 && opt.damping <= 1.0)) throw std::invalid_argument("solve_stationary: damping not in (0,1]");
  if (!admissible(u0.values)) throw TouchdownError("solve_stationary: initial guess touches down");

  SolveReport rep;
  rep.solution = u0;
  rep.iterations = 0;
  try {
    switch (opt.method) {
      case Method::picard:
        picard_loop(model, plate, p, opt, opt.max_iter, rep);
        break;
      case Method::newton:
        newton_loop(model, plate, p, opt, rep);
        break;
      case Method::hybrid: {
        picard_loop(model, plate, p, opt, std::min(opt.picard_budget, opt.max_iter), rep);
        if (!rep.converged) {
          if (rep.touchdown || !admissible(rep.solution.values)) rep.solution = u0;
          rep.touchdown = false;
          newton_loop(model, plate, p, opt, rep);
        }
        break;
      }
    }
    if (admissible(rep.solution.values)) rep.force = model.force(rep.solution, p);
  } catch (const TouchdownError&) {
    rep.converged = false;
    rep.touchdown = true;
  }
  return rep;
}

double w23_norm(const PlateField& u) {
  const RadialGrid& g = *u.grid;
  const Vector& v = u.values;
  const Vector ur = radial_derivative(g, v);
  const Vector lap = radial_laplacian(g, v);
  const Vector urr = radial_second_derivative(g, v);
  const Vector dens = v.cwiseAbs().array().cube() + ur.cwiseAbs().array().cube() + lap.cwiseAbs().array().cube() +
                      urr.cwiseAbs().array().cube();
  return std::cbrt(integrate_disc(g, dens));
}

MembershipReport membership(const PlateField& u, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("membership: rho not in (0,1)");
  MembershipReport rep;
  rep.rho = rho;
  rep.w23_norm = w23_norm(u);
  rep.min_gap = u.min() + 1.0;
  const bool conforming = std::abs(u.rim()) <= 1e-12;
  rep.in_S = conforming && rep.w23_norm < 1.0 / rho && rep.min_gap > rho;
  return rep;
}

bool StationaryInvariants::ok(double tol, double steklov_tol) const {
  return rim <= tol && steklov_residual <= steklov_tol && u_max <= tol && u_min > -1.0 && min_laplacian >= -tol &&
         min_force >= 1.0 - tol && min_dz_psi >= 1.0 - tol && max_psi_excess <= tol;
}

double steklov_tolerance(const PlateField& u) {
  const double h = u.grid->h();
  return 2.0 * h * h * (1.0 + sup_norm(u.values));
}

StationaryInvariants check_invariants(const PlateOperator& plate, const PlateField& u, const TraceForce& g,
                                      const PotentialField* phi) {
  StationaryInvariants inv;
  const auto [rim, steklov] = check_hinged_bc(u, plate.params());
  inv.rim = rim;
  inv.steklov_residual = steklov;
  inv.u_max = u.values.maxCoeff();
  inv.u_min = u.min();
  inv.min_laplacian = (-plate.moment(u.values)).minCoeff();
  inv.min_force = g.values.size() ? g.values.minCoeff() : 0.0;
  if (phi) {
    const MaxPrincipleReport mp = check_max_principle(*phi);
    inv.min_dz_psi = mp.inf_dz_psi;
    inv.max_psi_excess = mp.sup_excess;
  } else {
    inv.min_dz_psi = 1.0;
    inv.max_psi_excess = 0.0;
  }
  return inv;
}

std::vector<const ContinuationRecord*> ContinuationTrace::accepted() const {
  std::vector<const ContinuationRecord*> out;
  for (const auto& r : records) {
    if (r.converged) out.push_back(&r);
  }
  return out;
}

ContinuationTrace continue_in_lambda(ForceModel& model, const PlateOperator& plate, const Params& p,
                                     const ContinuationOptions& opt) {
  if (!(opt.dlambda0 > 0.0)) throw std::invalid_argument("continue_in_lambda: dlambda0 must be positive");
  const auto grid = plate.grid_ptr();
  ContinuationTrace trace;

  Params q = p;
  q.lambda = 0.0;
  PlateField lo_u = PlateField::zero(grid);
  PlateField prev_u = lo_u;
  double lo = 0.0;
  double prev = 0.0;
  bool have_prev = false;
  double hi = std::numeric_limits<double>::infinity();
  double step = opt.dlambda0;
  const double width = opt.width_ratio * opt.dlambda0;

  {
    ContinuationRecord r;
    r.lambda = 0.0;
    r.u_min = 0.0;
    r.iterations = 1;
    r.converged = true;
    r.solution = lo_u;
    trace.records.push_back(std::move(r));
  }

  while (hi - lo > width) {
    if (std::isfinite(hi)) step = 0.5 * (hi - lo);
    const double trial = lo + step;
    if (trial > opt.lambda_max) break;
    q.lambda = trial;

    PlateField guess = lo_u;
    if (have_prev && lo > prev) {
      guess.values = lo_u.values + (trial - lo) / (lo - prev) * (lo_u.values - prev_u.values);
      if (guess.min() <= -0.95) guess = lo_u;
    }

    SolveReport rep = solve_stationary(model, plate, q, guess, opt.solve);
    if (!rep.converged && guess.values != lo_u.values) rep = solve_stationary(model, plate, q, lo_u, opt.solve);

    ContinuationRecord r;
    r.lambda = trial;
    r.iterations = rep.iterations;
    r.u_min = rep.solution.min();
    r.converged = rep.converged;
    if (rep.converged) {
      const StationaryInvariants inv = check_invariants(plate, rep.solution, rep.force);
      r.invariants_ok = inv.ok(opt.invariant_tol, steklov_tolerance(rep.solution));
      r.solution = rep.solution;
      prev_u = lo_u;
      prev = lo;
      have_prev = true;
      lo_u = rep.solution;
      lo = trial;
    } else {
      hi = std::min(hi, trial);
    }
    trace.records.push_back(std::move(r));
  }

  std::stable_sort(trace.records.begin(), trace.records.end(),
                   [](const ContinuationRecord& a, const ContinuationRecord& b) { return a.lambda < b.lambda; });
  trace.bracket_lo = lo;
  trace.bracket_hi = hi;
  trace.lambda_star = std::isfinite(hi) ? 0.5 * (lo + hi) : lo;
  return trace;
}

}  // namespace mems
