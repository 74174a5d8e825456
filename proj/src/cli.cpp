#include "mems/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "mems/config.hpp"
#include "mems/energy.hpp"
#include "mems/evolution.hpp"
#include "mems/io.hpp"
#include "mems/smallgap.hpp"
#include "mems/spectrum.hpp"
#include "mems/stationary.hpp"

namespace mems::cli {
namespace {

namespace fs = std::filesystem;

struct Context {
  RunConfig cfg;
  std::string input;
  fs::path out_dir;
  std::ostream& out;
  std::ostream& err;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

void save(const Context& ctx, const std::string& name, const std::string& content) {
  write_file((ctx.out_dir / name).string(), content);
}

template <class F>
std::string render(F&& f) {
  std::ostringstream s;
  f(s);
  return s.str();
}

Method method_of(const RunConfig& cfg) { return cfg.method == "newton" ? Method::newton : Method::picard; }

SolveOptions solve_options(const RunConfig& cfg) { return {method_of(cfg), cfg.tol, cfg.max_iter, cfg.damping, 40}; }

ContinuationOptions continuation_options(const RunConfig& cfg) {
  ContinuationOptions co;
  co.dlambda0 = cfg.dlambda0;
  co.solve = {cfg.method == "newton" ? Method::newton : Method::hybrid, cfg.tol, 20, cfg.damping, 40};
  return co;
}

std::shared_ptr<const CylinderGrid> cylinder(const RunConfig& cfg) {
  return std::make_shared<const CylinderGrid>(cfg.nr, cfg.neta);
}

Vector profile(const RadialGrid& g) {
  return sample(g, [](double r) { return 1.0 - r * r; });
}

void add_invariants(JsonObject& j, const StationaryInvariants& inv) {
  j.add("rim", inv.rim)
      .add("steklov_residual", inv.steklov_residual)
      .add("u_max", inv.u_max)
      .add("u_min", inv.u_min)
      .add("min_laplacian", inv.min_laplacian)
      .add("min_force", inv.min_force)
      .add("min_dz_psi", inv.min_dz_psi)
      .add("max_psi_excess", inv.max_psi_excess);
}

bool certify_trace(const PlateOperator& plate, const Params& p, const EigenPair& eig, const ContinuationTrace& tr) {
  bool ok = true;
  for (const auto* rec : tr.accepted()) {
    Params q = p;
    q.lambda = rec->lambda;
    ok = ok && nonexistence_certificate(plate, q, eig, rec->solution).holds();
  }
  return ok;
}

bool trace_invariants_ok(const ContinuationTrace& tr) {
  bool ok = true;
  for (const auto* rec : tr.accepted()) ok = ok && rec->invariants_ok;
  return ok;
}

int cmd_stationary(Context& ctx) {
  const Params& p = ctx.cfg.params;
  const auto cg = cylinder(ctx.cfg);
  const auto g = cg->radial_ptr();
  const PlateOperator plate(p, g);
  FreeBoundaryForce model(cg);
  const SolveReport rep = solve_stationary(model, plate, p, PlateField::zero(g), solve_options(ctx.cfg));
  save(ctx, "u.csv", render([&](std::ostream& s) { write_field_csv(s, rep.solution); }));

  JsonObject j;
  j.add("command", "stationary")
      .add("lambda", p.lambda)
      .add("converged", rep.converged)
      .add("iterations", rep.iterations)
      .add("residual", rep.residual);
  bool ok = rep.converged;
  if (rep.converged) {
    const PotentialField phi = model.potential().solve(rep.solution, p);
    const StationaryInvariants inv = check_invariants(plate, rep.solution, rep.force, &phi);
    const MembershipReport mem = membership(rep.solution, ctx.cfg.rho);
    add_invariants(j, inv);
    j.add("w23_norm", mem.w23_norm).add("in_S", mem.in_S);
    ok = inv.ok(1e-6, steklov_tolerance(rep.solution));
    j.add("invariants_ok", ok);
    save(ctx, "phi.csv", render([&](std::ostream& s) { write_potential_csv(s, phi); }));
  }
  save(ctx, "summary.json", j.str());
  ctx.out << fmt::format("stationary: converged={} iterations={} u_min={}\n", rep.converged, rep.iterations,
                         format_number(rep.solution.min()));
  return ok ? kOk : kViolation;
}

int cmd_sweep(Context& ctx) {
  const Params& p = ctx.cfg.params;
  const auto cg = cylinder(ctx.cfg);
  const PlateOperator plate(p, cg->radial_ptr());
  FreeBoundaryForce model(cg);
  const ContinuationTrace tr = continue_in_lambda(model, plate, p, continuation_options(ctx.cfg));
  const EigenPair eig = principal_eigenpair(plate);
  const bool inv_ok = trace_invariants_ok(tr);
  const bool cert_ok = certify_trace(plate, p, eig, tr);
  const bool below = std::isfinite(tr.bracket_hi) && tr.lambda_star < eig.mu1;

  save(ctx, "sweep.csv", render([&](std::ostream& s) { write_trace_csv(s, tr); }));
  JsonObject j;
  j.add("lambda_star", tr.lambda_star)
      .add("bracket_lo", tr.bracket_lo)
      .add("bracket_hi", tr.bracket_hi)
      .add("mu1", eig.mu1)
      .add("eps", p.eps)
      .add("records", static_cast<int>(tr.records.size()))
      .add("accepted", static_cast<int>(tr.accepted().size()))
      .add("invariants_ok", inv_ok)
      .add("certificate_ok", cert_ok)
      .add("lambda_star_below_mu1", below);
  save(ctx, "summary.json", j.str());
  ctx.out << fmt::format("sweep: lambda_star={} mu1={}\n", format_number(tr.lambda_star), format_number(eig.mu1));
  return inv_ok && cert_ok && below ? kOk : kViolation;
}

int cmd_eigen(Context& ctx) {
  const Params& p = ctx.cfg.params;
  const auto g = std::make_shared<const RadialGrid>(ctx.cfg.nr);
  const PlateOperator plate(p, g);
  const EigenPair eig = principal_eigenpair(plate);
  const EigenPair second = second_eigenpair(plate, eig);
  const int n = g->n();
  const bool positive = (eig.phi1.values.head(n).array() > 0.0).all();
  const double slope = boundary_normal_derivative(*g, eig.phi1.values);

  save(ctx, "phi1.csv", render([&](std::ostream& s) { write_field_csv(s, eig.phi1, "phi1"); }));
  JsonObject j;
  j.add("mu1", eig.mu1)
      .add("residual", eig.residual)
      .add("iterations", eig.iterations)
      .add("converged", eig.converged)
      .add("mu2", second.mu1)
      .add("boundary_slope", slope)
      .add("positive", positive);
  save(ctx, "summary.json", j.str());
  ctx.out << fmt::format("eigen: mu1={} mu2={}\n", format_number(eig.mu1), format_number(second.mu1));
  return positive && slope < 0.0 && eig.converged ? kOk : kViolation;
}

int cmd_stability(Context& ctx) {
  const Params& p = ctx.cfg.params;
  const auto cg = cylinder(ctx.cfg);
  const PlateOperator plate(p, cg->radial_ptr());
  FreeBoundaryForce model(cg);
  const ContinuationTrace tr = continue_in_lambda(model, plate, p, continuation_options(ctx.cfg));
  const auto acc = tr.accepted();
  std::vector<StabilityReport> reports(acc.size());

  const int jobs = std::max(1, std::min<int>(ctx.cfg.jobs, static_cast<int>(acc.size())));
  auto work = [&](int tid) {
    const PlateOperator local_plate(p, cg->radial_ptr());
    FreeBoundaryForce local(cg);
    for (std::size_t k = tid; k < acc.size(); k += jobs) {
      Params q = p;
      q.lambda = acc[k]->lambda;
      reports[k] = linearized_spectral_bound(local, local_plate, q, acc[k]->solution);
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  save(ctx, "stability.csv", render([&](std::ostream& s) {
         s << "lambda,min_real_part,stable\n";
         for (const auto& r : reports) {
           s << format_number(r.lambda) << ',' << format_number(r.min_real_part) << ',' << (r.stable ? 1 : 0) << '\n';
         }
       }));
  int stable = 0;
  for (const auto& r : reports) stable += r.stable ? 1 : 0;
  JsonObject j;
  j.add("lambda_star", tr.lambda_star)
      .add("records", static_cast<int>(reports.size()))
      .add("stable_records", stable)
      .add("min_real_part", reports.empty() ? std::nan("") : reports.front().min_real_part)
      .add("stable", !reports.empty() && reports.front().stable);
  save(ctx, "summary.json", j.str());
  ctx.out << fmt::format("stability: {} of {} records stable\n", stable, reports.size());
  return kOk;
}

int cmd_evolve(Context& ctx) {
  const Params& p = ctx.cfg.params;
  const auto cg = cylinder(ctx.cfg);
  const auto g = cg->radial_ptr();
  std::optional<PlateField> target;
  if (p.lambda == 0.0) {
    target = PlateField::zero(g);
  } else {
    const PlateOperator plate(p, g);
    FreeBoundaryForce model(cg);
    SolveOptions so = solve_options(ctx.cfg);
    so.method = Method::hybrid;
    const SolveReport rep = solve_stationary(model, plate, p, PlateField::zero(g), so);
    if (rep.converged) target = rep.solution;
  }
  PlateField u0 = target ? *target : PlateField::zero(g);
  u0.values += ctx.cfg.perturb * profile(*g);

  Evolver ev(p, cg, ctx.cfg.dt);
  const EvolutionTrace tr = ev.evolve(u0, ctx.cfg.t_final, target);
  save(ctx, "evolve.csv", render([&](std::ostream& s) { write_evolution_csv(s, tr); }));
  JsonObject j;
  j.add("outcome", to_string(tr.outcome))
      .add("fitted_rate", tr.fitted_rate)
      .add("steps", static_cast<int>(tr.times.size()) - 1)
      .add("t_end", tr.times.back())
      .add("final_u_min", tr.u_min.back())
      .add("has_target", target.has_value());
  save(ctx, "summary.json", j.str());
  ctx.out << fmt::format("evolve: outcome={} fitted_rate={}\n", to_string(tr.outcome), format_number(tr.fitted_rate));
  return kOk;
}

int cmd_smallgap(Context& ctx) {
  const auto g = std::make_shared<const RadialGrid>(ctx.cfg.nr);
  const SmallGapProblem pb(ctx.cfg.params, g);
  const SolveReport rep = solve_smallgap(pb, pb.params.lambda, PlateField::zero(g), solve_options(ctx.cfg));
  const ContinuationTrace tr = smallgap_fold(pb, continuation_options(ctx.cfg));
  const PlateOperator plate(pb.params, g);
  const EigenPair eig = principal_eigenpair(plate);
  const bool below = std::isfinite(tr.bracket_hi) && tr.lambda_star < eig.mu1;
  const bool inv_ok = trace_invariants_ok(tr);

  save(ctx, "u.csv", render([&](std::ostream& s) { write_field_csv(s, rep.solution); }));
  save(ctx, "sweep.csv", render([&](std::ostream& s) { write_trace_csv(s, tr); }));
  JsonObject j;
  j.add("eps", 0.0)
      .add("lambda", pb.params.lambda)
      .add("converged", rep.converged)
      .add("iterations", rep.iterations)
      .add("u_min", rep.solution.min())
      .add("lambda_star", tr.lambda_star)
      .add("bracket_lo", tr.bracket_lo)
      .add("bracket_hi", tr.bracket_hi)
      .add("mu1", eig.mu1)
      .add("invariants_ok", inv_ok);
  save(ctx, "summary.json", j.str());
  ctx.out << fmt::format("smallgap: converged={} lambda_star={}\n", rep.converged, format_number(tr.lambda_star));
  return rep.converged && below && inv_ok ? kOk : kViolation;
}

int cmd_energy(Context& ctx) {
  const Params& p = ctx.cfg.params;
  const auto cg = cylinder(ctx.cfg);
  const auto g = cg->radial_ptr();
  const PlateOperator plate(p, g);
  FreeBoundaryForce model(cg);
  SolveOptions so = solve_options(ctx.cfg);
  const SolveReport rep = solve_stationary(model, plate, p, PlateField::zero(g), so);
  if (!rep.converged) {
    ctx.err << "energy: stationary solve did not converge\n";
    return kViolation;
  }
  PotentialSolver& solver = model.potential();
  const EnergyReport e = total_energy(solver.solve(rep.solution, p), p);
  const EnergyReport e0 = total_energy(solver.solve(PlateField::zero(g), p), p);
  const MechanicalEnergy me = mechanical_energy(rep.solution, p);

  std::mt19937_64 rng(static_cast<std::uint64_t>(ctx.cfg.seed));
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  double dm = 0.0, de = 0.0, dt = 0.0, crit = 0.0;
  for (int k = 0; k < 5; ++k) {
    const double a = coef(rng), b = coef(rng), c = coef(rng);
    const Vector v = sample(*g, [&](double r) { return (1.0 - r * r) * (a + b * r * r + c * r * r * r * r); });
    dm = std::max(dm, variation_test_mech(rep.solution, v, p).defect);
    de = std::max(de, variation_test_elec(solver, rep.solution, v, p).defect);
    const VariationCheck t = variation_test_total(solver, rep.solution, v, p);
    dt = std::max(dt, t.defect);
    crit = std::max(crit, std::abs(t.fd) / v.cwiseAbs().maxCoeff());
  }
  const bool bound_ok = me.lower_bound <= me.value + 1e-12 * std::abs(me.value);
  JsonObject j;
  j.add("e_mech", e.e_mech)
      .add("e_elec", e.e_elec)
      .add("e_total", e.e_total)
      .add("bending_lower_bound", e.bending_lower_bound)
      .add("e_total_at_zero", e0.e_total)
      .add("defect_mech", dm)
      .add("defect_elec", de)
      .add("defect_total", dt)
      .add("criticality", crit);
  save(ctx, "summary.json", j.str());
  ctx.out << fmt::format("energy: e_total={} defects mech={} elec={} total={}\n", format_number(e.e_total),
                         format_number(dm), format_number(de), format_number(dt));
  return bound_ok && e.e_total < e0.e_total ? kOk : kViolation;
}

int cmd_mms(Context& ctx) {
  const int n = ctx.cfg.nr;
  const auto rows = mms_study({n, 2 * n, 4 * n}, ctx.cfg.params.eps);
  save(ctx, "mms.csv", render([&](std::ostream& s) {
         s << "n,error,order\n";
         for (const auto& r : rows) s << r.n << ',' << format_number(r.error) << ',' << format_number(r.order) << '\n';
       }));
  const double order = rows.back().order;
  JsonObject j;
  j.add("eps", ctx.cfg.params.eps).add("order", order).add("error", rows.back().error);
  save(ctx, "summary.json", j.str());
  ctx.out << fmt::format("mms: order={}\n", format_number(order));
  return order >= 1.8 && order <= 2.2 ? kOk : kViolation;
}

int cmd_verify(Context& ctx) {
  if (ctx.input.empty()) throw UsageError("verify: --input is required");
  std::istringstream in(read_file(ctx.input));
  const auto [r, u] = read_field_csv(in);
  const int n = static_cast<int>(r.size()) - 1;
  if (n < RadialGrid::kMinIntervals) throw UsageError(fmt::format("verify: {} has too few nodes", ctx.input));
  for (int i = 0; i <= n; ++i) {
    if (std::abs(r[i] - static_cast<double>(i) / n) > 1e-12) {
      throw UsageError(fmt::format("verify: {} is not on a uniform radial grid", ctx.input));
    }
  }
  const Params& p = ctx.cfg.params;
  const auto cg = std::make_shared<const CylinderGrid>(n, ctx.cfg.neta);
  const auto g = cg->radial_ptr();
  const PlateField field(g, u);
  const PlateOperator plate(p, g);
  FreeBoundaryForce model(cg);

  JsonObject j;
  j.add("lambda", p.lambda).add("n", n);
  if (std::abs(field.rim()) > 1e-12 || field.min() <= -1.0) {
    j.add("admissible", false);
    save(ctx, "summary.json", j.str());
    ctx.out << "verify: field is not admissible\n";
    return kViolation;
  }
  const PotentialField phi = model.potential().solve(field, p);
  const TraceForce force = trace_force(phi, p);
  const StationaryInvariants inv = check_invariants(plate, field, force, &phi);
  const double fixed = (picard_step(model, plate, field, p).values - u).cwiseAbs().maxCoeff();
  const MembershipReport mem = membership(field, ctx.cfg.rho);
  const EigenPair eig = principal_eigenpair(plate);
  const CertificateReport cert = nonexistence_certificate(plate, p, eig, field);
  const bool inv_ok = inv.ok(1e-6, steklov_tolerance(field));
  const bool fixed_ok = fixed <= 1e-8;

  j.add("admissible", true);
  add_invariants(j, inv);
  j.add("fixed_point_defect", fixed)
      .add("w23_norm", mem.w23_norm)
      .add("in_S", mem.in_S)
      .add("mu1", eig.mu1)
      .add("certificate", cert.holds())
      .add("invariants_ok", inv_ok);
  save(ctx, "summary.json", j.str());
  const bool ok = inv_ok && fixed_ok && cert.holds();
  ctx.out << fmt::format("verify: {}\n", ok ? "pass" : "fail");
  return ok ? kOk : kViolation;
}

const std::map<std::string, std::function<int(Context&)>>& commands() {
  static const std::map<std::string, std::function<int(Context&)>> table = {
      {"stationary", cmd_stationary}, {"sweep", cmd_sweep},   {"eigen", cmd_eigen},
      {"stability", cmd_stability},   {"evolve", cmd_evolve}, {"smallgap", cmd_smallgap},
      {"energy", cmd_energy},         {"mms", cmd_mms},       {"verify", cmd_verify}};
  return table;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const std::string usage =
      "usage: memsfb <command> [options]\n"
      "commands: stationary sweep eigen stability evolve smallgap energy mms verify\n";
  if (args.empty()) {
    err << usage;
    return kUsage;
  }
  const std::string command = args.front();
  if (command == "--help" || command == "-h") {
    out << usage;
    return kOk;
  }
  const auto it = commands().find(command);
  if (it == commands().end()) {
    err << fmt::format("unknown command '{}'\n", command) << usage;
    return kUsage;
  }

  CLI::App app("memsfb " + command);
  std::string config_path;
  std::string input;
  app.add_option("--config", config_path, "flat key=value config file");
  app.add_option("--input", input, "stored solution CSV (verify)");
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"--beta", "beta"},       {"--tau", "tau"},         {"--sigma", "sigma"},       {"--eps", "eps"},
      {"--lambda", "lambda"},   {"--kappa", "kappa"},     {"--nr", "nr"},             {"--neta", "neta"},
      {"--tol", "tol"},         {"--max-iter", "max_iter"}, {"--out", "out_dir"},     {"--method", "method"},
      {"--damping", "damping"}, {"--dlambda0", "dlambda0"}, {"--t-final", "t_final"}, {"--dt", "dt"},
      {"--perturb", "perturb"}, {"--rho", "rho"},         {"--jobs", "jobs"},         {"--seed", "seed"}};
  std::vector<std::string> values(flags.size());
  std::vector<CLI::Option*> opts;
  for (std::size_t k = 0; k < flags.size(); ++k) opts.push_back(app.add_option(flags[k].first, values[k]));

  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  Context ctx{RunConfig{}, input, {}, out, err};
  int status = kOk;
  try {
    if (!config_path.empty()) ctx.cfg = load_config(config_path, ctx.cfg);
    for (std::size_t k = 0; k < flags.size(); ++k) {
      if (opts[k]->count() > 0) apply_config_value(ctx.cfg, flags[k].second, values[k]);
    }
    check_controls(ctx.cfg);
    for (const auto& msg : validate(ctx.cfg.params)) {
      if (msg == "sigma not in (-1,1)" && ctx.cfg.params.sigma == 1.0) continue;
      throw ConfigError("invalid parameters: " + msg);
    }
    ctx.out_dir = ctx.cfg.out_dir;
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec) throw IoError(fmt::format("cannot create output directory {}: {}", ctx.out_dir.string(), ec.message()));
    save(ctx, "effective_config.txt", to_config_text(ctx.cfg));
    status = it->second(ctx);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  try {
    write_file((ctx.out_dir / "run.log").string(),
               fmt::format("{} command={} status={}\n", timestamp(), command, status));
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  }
  return status;
}

}  // namespace mems::cli
