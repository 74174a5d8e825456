#pragma once

#include <iosfwd>
#include <string>

#include "mems/params.hpp"

namespace mems {

/// Model parameters plus grid and solver controls, as read from a flat
/// key=value file. Recognised keys: beta, tau, sigma, eps, lambda, kappa,
/// nr, neta, tol, max_iter, out_dir, method, damping, dlambda0, t_final,
/// dt, perturb, rho, jobs, seed. Blank lines and lines starting with '#'
/// are ignored.
struct RunConfig {
  Params params;
  int nr = 64;
  int neta = 16;
  double tol = 1e-10;
  int max_iter = 200;
  std::string out_dir = "out";
  std::string method = "picard";  // picard | newton
  double damping = 1.0;
  double dlambda0 = 0.5;
  double t_final = 1.0;
  double dt = 1e-3;
  double perturb = 0.05;
  double rho = 0.1;
  int jobs = 1;
  int seed = 1;
};

/// Thrown for malformed config text or out-of-range controls.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Sets a single key on cfg. Throws ConfigError on unknown keys or values
/// that do not parse completely.
void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Checks the control invariants (grid sizes >= 16, tol in (0, 1e-4],
/// max_iter >= 1) and the command options. Throws ConfigError.
void check_controls(const RunConfig& cfg);

/// Serialises every key in a fixed order, numbers with 17 significant digits.
std::string to_config_text(const RunConfig& cfg);

}  // namespace mems
