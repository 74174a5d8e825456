#include "mems/evolution.hpp"

#include <cmath>
#include <limits>

#include "mems/energy.hpp"

namespace mems {
namespace {

double shift_for(double dt, TimeScheme s) {
  if (!(dt > 0.0)) throw std::invalid_argument("Evolver: dt must be positive");
  return s == TimeScheme::euler ? 1.0 / dt : 2.0 / dt;
}

double l2_disc(const RadialGrid& g, const Vector& v) { return std::sqrt(integrate_disc(g, v.array().square().matrix())); }

}  // namespace

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::converged:
      return "converged";
    case Outcome::touchdown:
      return "touchdown";
    case Outcome::max_time:
      return "max_time";
  }
  return "unknown";
}

Evolver::Evolver(const Params& p, std::shared_ptr<const CylinderGrid> grid, double dt, TimeScheme scheme)
    : params_(p),
      grid_(grid),
      dt_(dt),
      scheme_(scheme),
      potential_(grid),
      shifted_(p, grid->radial_ptr(), shift_for(dt, scheme)) {
  if (scheme_ == TimeScheme::trapezoidal) plain_ = std::make_unique<PlateOperator>(p, grid_->radial_ptr());
}

PlateField Evolver::advance(const PlateField& u, const PotentialField& phi) {
  const Vector g = trace_force(phi, params_).values;
  if (scheme_ == TimeScheme::euler) return shifted_.solve(u.values / dt_ - params_.lambda * g);
  const Vector rhs = 2.0 * u.values / dt_ - plain_->apply(u) - 2.0 * params_.lambda * g;
  return shifted_.solve(rhs);
}

PlateField Evolver::step(const PlateField& u) { return advance(u, potential_.solve(u, params_)); }

EvolutionTrace Evolver::evolve(const PlateField& u0, double T, const std::optional<PlateField>& target,
                               const EvolutionOptions& opt) {
  if (!(T > 0.0)) throw std::invalid_argument("evolve: T must be positive");
  if (std::abs(u0.rim()) > 1e-12) throw std::invalid_argument("evolve: initial state violates u(1) = 0");
  if (u0.min() <= -1.0 + opt.stop_gap) throw std::invalid_argument("evolve: initial state inside the touchdown gap");

  const RadialGrid& g = grid_->radial();
  EvolutionTrace tr;
  PlateField u = u0;
  double t = 0.0;
  double first_rate = -1.0;
  double last_rate = std::numeric_limits<double>::infinity();

  auto record = [&](const PotentialField* phi) {
    tr.times.push_back(t);
    tr.u_min.push_back(u.min());
    if (target) tr.error.push_back(l2_disc(g, u.values - target->values));
    if (opt.record_energy) {
      tr.energy.push_back(phi ? total_energy(*phi, params_).e_total : std::numeric_limits<double>::quiet_NaN());
    }
  };

  const long steps = static_cast<long>(std::ceil(T / dt_ - 1e-9));
  tr.outcome = Outcome::max_time;
  for (long k = 0;; ++k) {
    PotentialField phi;
    try {
      phi = potential_.solve(u, params_);
    } catch (const TouchdownError&) {
      record(nullptr);
      tr.outcome = Outcome::touchdown;
      break;
    }
    record(&phi);
    if (k == steps) break;
    PlateField next = advance(u, phi);
    const double rate = (next.values - u.values).cwiseAbs().maxCoeff() / dt_;
    if (first_rate < 0.0) first_rate = rate;
    last_rate = rate;
    u = std::move(next);
    t = (k + 1) * dt_;
    if (!u.values.allFinite() || u.min() <= -1.0 + opt.stop_gap) {
      tr.times.push_back(t);
      tr.u_min.push_back(u.values.allFinite() ? u.min() : -1.0);
      if (target) tr.error.push_back(l2_disc(g, u.values - target->values));
      if (opt.record_energy) tr.energy.push_back(std::numeric_limits<double>::quiet_NaN());
      tr.outcome = Outcome::touchdown;
      break;
    }
  }
  if (tr.outcome != Outcome::touchdown && last_rate <= opt.steady_ratio * first_rate) tr.outcome = Outcome::converged;
  if (tr.outcome != Outcome::touchdown && first_rate == 0.0) tr.outcome = Outcome::converged;
  tr.fitted_rate = target ? fit_decay_rate(tr.times, tr.error) : std::numeric_limits<double>::quiet_NaN();
  tr.final_state = u;
  return tr;
}

double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values) {
  const std::size_t n = std::min(times.size(), values.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  int count = 0;
  for (std::size_t i = n / 2; i < n; ++i) {
    if (!(values[i] > 0.0)) continue;
    const double y = std::log(values[i]);
    st += times[i];
    sy += y;
    stt += times[i] * times[i];
    sty += times[i] * y;
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  const double den = count * stt - st * st;
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return -(count * sty - st * sy) / den;
}

}  // namespace mems
