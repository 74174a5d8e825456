#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mems/plate.hpp"
#include "mems/potential.hpp"

namespace mems {

enum class Outcome { converged, touchdown, max_time };

std::string to_string(Outcome o);

/// Linear part: backward Euler (default) or trapezoidal; g is always explicit.
enum class TimeScheme { euler, trapezoidal };

struct EvolutionOptions {
  double stop_gap = 1e-3;
  /// converged when the last increment rate |u_{n+1} - u_n|_inf / dt has
  /// dropped below steady_ratio times that of the first step.
  double steady_ratio = 1e-2;
  TimeScheme scheme = TimeScheme::euler;
  bool record_energy = true;
};

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> u_min;
  std::vector<double> error;   // |u - target|_2 over the disc; empty without target
  std::vector<double> energy;  // e_total; empty unless recorded
  Outcome outcome = Outcome::max_time;
  /// -slope of the least-squares line through ln(error) over the tail half; NaN without target.
  double fitted_rate = 0.0;
  PlateField final_state;
};

/// Semi-implicit integrator for u_t + A u = -lambda g(u) with hinged
/// conditions; (I + dt A) is factored once.
class Evolver {
 public:
  Evolver(const Params& p, std::shared_ptr<const CylinderGrid> grid, double dt,
          TimeScheme scheme = TimeScheme::euler);

  double dt() const { return dt_; }
  const Params& params() const { return params_; }

  /// One step from u; throws TouchdownError if the force cannot be evaluated.
  PlateField step(const PlateField& u);

  /// Steps until t >= T or min u <= -1 + stop_gap.
  EvolutionTrace evolve(const PlateField& u0, double T, const std::optional<PlateField>& target = std::nullopt,
                        const EvolutionOptions& opt = {});

 private:
  PlateField advance(const PlateField& u, const PotentialField& phi);

  Params params_;
  std::shared_ptr<const CylinderGrid> grid_;
  double dt_;
  TimeScheme scheme_;
  PotentialSolver potential_;
  PlateOperator shifted_;
  std::unique_ptr<PlateOperator> plain_;
};

/// Least-squares slope of ln(values) against times over the second half
/// of the samples, negated; NaN if fewer than two positive samples.
double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values);

}  // namespace mems
