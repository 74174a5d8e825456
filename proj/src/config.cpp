#include "mems/config.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace mems {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (used == value.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError(fmt::format("config: value '{}' for key '{}' is not a number", value, key));
}

int to_int(const std::string& key, const std::string& value) {
  int x = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(fmt::format("config: value '{}' for key '{}' is not an integer", value, key));
  }
  return x;
}

}  // namespace

void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto& p = cfg.params;
  if (key == "beta") p.beta = to_double(key, value);
  else if (key == "tau") p.tau = to_double(key, value);
  else if (key == "sigma") p.sigma = to_double(key, value);
  else if (key == "eps") p.eps = to_double(key, value);
  else if (key == "lambda") p.lambda = to_double(key, value);
  else if (key == "kappa") p.kappa = to_double(key, value);
  else if (key == "nr") cfg.nr = to_int(key, value);
  else if (key == "neta") cfg.neta = to_int(key, value);
  else if (key == "tol") cfg.tol = to_double(key, value);
  else if (key == "max_iter") cfg.max_iter = to_int(key, value);
  else if (key == "out_dir") cfg.out_dir = value;
  else if (key == "method") cfg.method = value;
  else if (key == "damping") cfg.damping = to_double(key, value);
  else if (key == "dlambda0") cfg.dlambda0 = to_double(key, value);
  else if (key == "t_final") cfg.t_final = to_double(key, value);
  else if (key == "dt") cfg.dt = to_double(key, value);
  else if (key == "perturb") cfg.perturb = to_double(key, value);
  else if (key == "rho") cfg.rho = to_double(key, value);
  else if (key == "jobs") cfg.jobs = to_int(key, value);
  else if (key == "seed") cfg.seed = to_int(key, value);
  else throw ConfigError(fmt::format("config: unknown key '{}'", key));
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("config line {}: expected key=value, got '{}'", lineno, t));
    }
    apply_config_value(base, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  return parse_config(in, base);
}

void check_controls(const RunConfig& cfg) {
  if (cfg.nr < 16) throw ConfigError(fmt::format("nr = {} is below the minimum of 16", cfg.nr));
  if (cfg.neta < 16) throw ConfigError(fmt::format("neta = {} is below the minimum of 16", cfg.neta));
  if (!(cfg.tol > 0.0 && cfg.tol <= 1e-4)) {
    throw ConfigError(fmt::format("tol = {} is outside (0, 1e-4]", cfg.tol));
  }
  if (cfg.max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (cfg.method != "picard" && cfg.method != "newton") {
    throw ConfigError(fmt::format("method '{}' is not picard or newton", cfg.method));
  }
  if (!(cfg.damping > 0.0 && cfg.damping <= 1.0)) throw ConfigError("damping must lie in (0, 1]");
  if (!(cfg.dlambda0 > 0.0)) throw ConfigError("dlambda0 must be positive");
  if (!(cfg.t_final > 0.0)) throw ConfigError("t_final must be positive");
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(cfg.rho > 0.0 && cfg.rho < 1.0)) throw ConfigError("rho must lie in (0, 1)");
  if (cfg.jobs < 1) throw ConfigError("jobs must be at least 1");
  if (cfg.out_dir.empty()) throw ConfigError("out_dir is empty");
}

std::string to_config_text(const RunConfig& cfg) {
  const auto& p = cfg.params;
  std::ostringstream out;
  out << fmt::format("beta={:.17g}\n", p.beta) << fmt::format("tau={:.17g}\n", p.tau)
      << fmt::format("sigma={:.17g}\n", p.sigma) << fmt::format("eps={:.17g}\n", p.eps)
      << fmt::format("lambda={:.17g}\n", p.lambda) << fmt::format("kappa={:.17g}\n", p.kappa)
      << fmt::format("nr={}\n", cfg.nr) << fmt::format("neta={}\n", cfg.neta)
      << fmt::format("tol={:.17g}\n", cfg.tol) << fmt::format("max_iter={}\n", cfg.max_iter)
      << fmt::format("out_dir={}\n", cfg.out_dir) << fmt::format("method={}\n", cfg.method)
      << fmt::format("damping={:.17g}\n", cfg.damping) << fmt::format("dlambda0={:.17g}\n", cfg.dlambda0)
      << fmt::format("t_final={:.17g}\n", cfg.t_final) << fmt::format("dt={:.17g}\n", cfg.dt)
      << fmt::format("perturb={:.17g}\n", cfg.perturb) << fmt::format("rho={:.17g}\n", cfg.rho)
      << fmt::format("jobs={}\n", cfg.jobs) << fmt::format("seed={}\n", cfg.seed);
  return out.str();
}

}  // namespace mems
