// prcsync: command-line front end. Every run writes its data table plus a
// JSON sidecar holding the full configuration; `prcsync --config sidecar.json`
// repeats the run.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prcsync/bvp.hpp"
#include "prcsync/density.hpp"
#include "prcsync/errors.hpp"
#include "prcsync/io.hpp"
#include "prcsync/lyapunov.hpp"
#include "prcsync/parallel.hpp"
#include "prcsync/sde.hpp"
#include "prcsync/variational.hpp"

using namespace prcsync;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum ExitCode { kOk = 0, kFailure = 1, kInadmissible = 2, kNoConvergence = 3 };

ConstraintParams params_of(const RunConfig& cfg) { return {cfg.a, cfg.b, cfg.c}; }

// Canonical curves, all scaled to unit L2 norm so exponents compare fairly.
Prc resolve_prc(const RunConfig& cfg) {
  if (!cfg.prc_coeffs.is_null()) return prc_from_json(cfg.prc_coeffs);
  if (cfg.prc == "type2") {
    const double s[] = {-std::sqrt(2.0)};
    return Prc::from_fourier(std::span<const double>{}, s);
  }
  if (cfg.prc == "type1") {
    const double r = std::sqrt(2.0 / 3.0);
    const double c[] = {r, -r};
    return Prc::from_fourier(c, {});
  }
  if (cfg.prc == "optimal") {
    const ConstraintParams cp = params_of(cfg);
    const ConstraintCase cc = classify_constraint_case(cp);
    Prc shape;
    if (cc.classification == CaseClass::unique_optimum) {
      shape = optimal_prc_perturbative(cp, NoiseAmplitude(cfg.sigma)).optimal;
    } else if (cc.classification == CaseClass::solution_family && cp.a == 0.0) {
      shape = family_prc(cfg.sigma > 0.0 ? family_optimal_K(cp.b, NoiseAmplitude(cfg.sigma)) : 0.0,
                         cp.b);
    } else {
      throw InadmissibleCase(std::string("no optimal PRC: case is ") +
                             std::string(to_string(cc.classification)));
    }
    return (1.0 / std::sqrt(shape.mean_square(0))) * shape;
  }
  throw InvalidArgument("unknown PRC name '" + cfg.prc + "' (type1, type2, optimal)");
}

std::vector<double> grid_points(int n) {
  if (n < 3) throw InvalidArgument("grid needs at least 3 points");
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = static_cast<double>(i) / n;
  return t;
}

std::string table_path(const RunConfig& cfg) {
  return cfg.out + (cfg.format == "json" ? ".json" : ".csv");
}

void finish(const RunConfig& cfg, double seconds, const json& results) {
  write_json(cfg.out + ".sidecar.json", make_sidecar(cfg, json{{"total_seconds", seconds}}, results));
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Amplitude of sin(2 pi t) sin(4 pi t): that product is (cos u - cos 3u)/2, and
// the alpha_3 coefficient carries it alone.
double product_amplitude(const Prc& d) { return -2.0 * d.cos_coeff(3); }

double overtone_norm(const Prc& d) {
  double s = 0.0;
  for (int k = 2; k <= d.order(); ++k) s += d.harmonic_amplitude(k) * d.harmonic_amplitude(k);
  return std::sqrt(s);
}

double sup_difference(const Prc& x, const Prc& y, int n = 2000) {
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / n;
    m = std::max(m, std::abs(x(t) - y(t)));
  }
  return m;
}

json residual_json(const ResidualNorms& r) {
  return {{"ode", r.ode}, {"constraint", r.constraint}, {"periodicity", r.periodicity}};
}

int cmd_optimize(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const ConstraintParams cp = params_of(cfg);
  const NoiseAmplitude sigma(cfg.sigma);
  const ConstraintCase cc = classify_constraint_case(cp);
  const std::string cls(to_string(cc.classification));

  if (cc.classification == CaseClass::no_periodic_solution) {
    throw InadmissibleCase("no periodic solution for (a, b, c) = (" + std::to_string(cp.a) + ", " +
                           std::to_string(cp.b) + ", " + std::to_string(cp.c) + ")");
  }
  if (cc.classification == CaseClass::solution_family) {
    if (cp.a != 0.0) {
      throw InadmissibleCase("resonant solution family: no unique optimum");
    }
    const double k_star = family_optimal_K(cp.b, sigma);
    std::vector<double> ks, lam, reduced;
    for (int i = 0; i <= 200; ++i) {
      const double k = -1.0 + 0.01 * i;
      ks.push_back(k);
      lam.push_back(lyapunov_family(k, cp.b, sigma).value);
      reduced.push_back(family_lambda_reduced(k, cp.b, sigma));
    }
    write_table(table_path(cfg), cfg.format, {"K", "lambda", "lambda_reduced"}, {ks, lam, reduced});
    const json results{{"classification", cls},
                       {"k_star", k_star},
                       {"lambda_star", lyapunov_family(k_star, cp.b, sigma).value},
                       {"prc", prc_to_json(family_prc(k_star, cp.b))}};
    finish(cfg, elapsed(start), results);
    std::cout << "solution family: K* = " << k_star << '\n';
    return kOk;
  }

  const PerturbationSolution an = optimal_prc_perturbative(cp, sigma);
  BvpOptions opts;
  opts.modes = cfg.modes;
  const BvpSolution num = solve_euler_lagrange(cp, sigma, std::nullopt, opts);

  const std::vector<double> t = grid_points(cfg.grid);
  std::vector<double> va(t.size()), vn(t.size()), diff(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    va[i] = an.optimal(t[i]);
    vn[i] = num.delta(t[i]);
    diff[i] = vn[i] - va[i];
  }
  write_table(table_path(cfg), cfg.format, {"theta", "analytic", "numeric", "difference"},
              {t, va, vn, diff});
  write_json(cfg.out + ".solution.json", solution_to_json(num));

  const double dev = sup_difference(num.delta, an.optimal);
  const json results{{"classification", cls},
                     {"max_deviation", dev},
                     {"relative_deviation", dev / std::abs(an.c0)},
                     {"c0", an.c0},
                     {"nu1", num.nu1},
                     {"nu10", an.nu10},
                     {"iterations", num.iterations},
                     {"residuals", residual_json(num.residuals)},
                     {"product_amplitude_numeric", product_amplitude(num.delta)},
                     {"product_amplitude_analytic", product_amplitude(an.optimal)}};
  finish(cfg, elapsed(start), results);
  std::cout << "max deviation " << dev << " (" << dev / std::abs(an.c0) << " of |C0|), nu1 "
            << num.nu1 << " vs " << an.nu10 << '\n';
  return kOk;
}

StationaryDensity density_for(const Prc& prc, const RunConfig& cfg, const std::string& method) {
  const NoiseAmplitude sigma(cfg.sigma);
  if (method == "exact" || method.empty()) {
    ExactDensityOptions o;
    o.n = static_cast<std::size_t>(cfg.grid);
    return density_exact(prc, sigma, o);
  }
  if (method == "perturbative") {
    return density_perturbative(prc, sigma, cfg.order, static_cast<std::size_t>(cfg.grid));
  }
  if (method == "empirical") {
    const PhaseTrajectory traj =
        simulate_phase(prc, sigma, cfg.burn_in + cfg.duration, cfg.dt, cfg.seed, cfg.theta0);
    return empirical_density(traj, cfg.bins, cfg.burn_in);
  }
  throw InvalidArgument("density method must be exact, perturbative or empirical");
}

int cmd_lyapunov(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const Prc prc = resolve_prc(cfg);
  const NoiseAmplitude sigma(cfg.sigma);
  std::vector<std::string> methods = cfg.methods;
  if (methods.empty()) methods = {"analytic", "uniform-approx", "monte-carlo"};

  std::vector<std::string> labels;
  std::vector<double> values, errors;
  json results = json::object();
  for (const std::string& m : methods) {
    LyapunovEstimate est;
    if (m == "analytic") {
      est = lyapunov_analytic(prc, sigma, density_for(prc, cfg, cfg.method));
    } else if (m == "uniform-approx") {
      est = lyapunov_uniform_approx(prc, sigma);
    } else if (m == "monte-carlo") {
      LyapunovMcOptions o;
      o.duration = cfg.duration;
      o.dt = cfg.dt;
      o.realizations = cfg.realizations;
      o.seed = cfg.seed;
      est = estimate_lyapunov_mc(prc, sigma, o);
    } else {
      throw InvalidArgument("unknown method '" + m + "' (analytic, uniform-approx, monte-carlo)");
    }
    est.value += 0.0;  // no "-0" at sigma = 0
    labels.push_back(m);
    values.push_back(est.value);
    errors.push_back(est.std_error.value_or(kNaN));
    results[m] = {{"value", est.value}};
    if (est.std_error) results[m]["std_error"] = *est.std_error;
    std::cout << m << ' ' << est.value;
    if (est.std_error) std::cout << " +- " << *est.std_error;
    std::cout << '\n';
  }
  write_labelled_table(table_path(cfg), cfg.format, "method", labels, {"lambda", "std_error"},
                       {values, errors});
  finish(cfg, elapsed(start), results);
  return kOk;
}

int cmd_density(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const Prc prc = resolve_prc(cfg);
  const std::string method = cfg.method.empty() ? "exact" : cfg.method;
  const StationaryDensity d = density_for(prc, cfg, method);
  write_table(table_path(cfg), cfg.format, {"theta", "P"}, {d.theta, d.values});
  json results{{"J", d.flux}, {"method", std::string(to_string(d.method))}, {"sigma", d.sigma}};
  if (d.method != DensityMethod::empirical) {
    results["stationarity_residual"] = stationarity_residual(d, prc, NoiseAmplitude(cfg.sigma));
  }
  finish(cfg, elapsed(start), results);
  std::cout << "J = " << d.flux << '\n';
  return kOk;
}

int cmd_simulate(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const Prc prc = resolve_prc(cfg);
  const NoiseAmplitude sigma(cfg.sigma);
  if (cfg.record_every < 1) throw InvalidArgument("record_every must be positive");
  json results = json::object();
  if (cfg.oscillators > 0) {
    const EnsembleSeries s = ensemble_sync(prc, sigma, cfg.oscillators, cfg.duration, cfg.dt,
                                           cfg.seed, cfg.record_every);
    write_table(table_path(cfg), cfg.format, {"t", "R", "median_distance"},
                {s.times, s.order_parameter, s.median_distance});
    const auto tsync = time_to_synchrony(s, 1e-3);
    results["time_to_synchrony"] = tsync ? json(*tsync) : json(nullptr);
    results["final_R"] = s.order_parameter.back();
  } else {
    const PhaseTrajectory traj =
        simulate_phase(prc, sigma, cfg.duration, cfg.dt, cfg.seed, cfg.theta0);
    std::vector<double> t, th;
    for (std::size_t i = 0; i < traj.times.size();
         i += static_cast<std::size_t>(cfg.record_every)) {
      t.push_back(traj.times[i]);
      th.push_back(traj.phases[i]);
    }
    write_table(table_path(cfg), cfg.format, {"t", "theta"}, {t, th});
    results["samples"] = t.size();
  }
  finish(cfg, elapsed(start), results);
  return kOk;
}

int cmd_sweep(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const ConstraintParams cp = params_of(cfg);
  const ConstraintCase cc = classify_constraint_case(cp);
  std::vector<double> sigmas = cfg.sigmas;
  if (sigmas.empty()) sigmas = {cfg.sigma};
  std::sort(sigmas.begin(), sigmas.end());
  const std::size_t n = sigmas.size();

  if (cc.classification == CaseClass::no_periodic_solution ||
      (cc.classification == CaseClass::solution_family && cp.a != 0.0)) {
    throw InadmissibleCase(std::string("no optimum to sweep: case is ") +
                           std::string(to_string(cc.classification)));
  }
  if (cc.classification == CaseClass::solution_family) {
    std::vector<double> k(n), lam(n);
    parallel_for(n, [&](std::size_t i) {
      const NoiseAmplitude s(sigmas[i]);
      k[i] = family_optimal_K(cp.b, s);
      lam[i] = lyapunov_family(k[i], cp.b, s).value;
    });
    write_table(table_path(cfg), cfg.format, {"sigma", "k_star", "lambda_family"},
                {sigmas, k, lam});
    finish(cfg, elapsed(start), json{{"classification", "solution-family"}});
    return kOk;
  }

  std::vector<double> converged(n), nu1(n, kNaN), dev(n, kNaN), amp_num(n, kNaN), amp_an(n),
      over_num(n, kNaN), lam_num(n, kNaN), lam_unif(n, kNaN), lam_an(n), resid(n, kNaN);
  std::vector<std::string> failures(n);
  BvpOptions opts;
  opts.modes = cfg.modes;
  parallel_for(n, [&](std::size_t i) {
    const NoiseAmplitude s(sigmas[i]);
    const PerturbationSolution an = optimal_prc_perturbative(cp, s);
    amp_an[i] = product_amplitude(an.optimal);
    lam_an[i] = lyapunov_analytic(an.optimal, s, density_exact(an.optimal, s)).value;
    try {
      const BvpSolution num = solve_euler_lagrange(cp, s, std::nullopt, opts);
      converged[i] = 1.0;
      nu1[i] = num.nu1;
      dev[i] = sup_difference(num.delta, an.optimal);
      amp_num[i] = product_amplitude(num.delta);
      over_num[i] = overtone_norm(num.delta);
      lam_num[i] = lyapunov_analytic(num.delta, s, density_exact(num.delta, s)).value;
      lam_unif[i] = lyapunov_uniform_approx(num.delta, s).value;
      resid[i] = num.residuals.ode;
    } catch (const ConvergenceError& e) {
      converged[i] = 0.0;
      failures[i] = e.what();
    }
  });
  write_table(table_path(cfg), cfg.format,
              {"sigma", "converged", "nu1", "max_deviation", "second_harmonic_numeric",
               "second_harmonic_analytic", "overtone_norm_numeric", "lambda_numeric",
               "lambda_uniform_numeric", "lambda_analytic_curve", "ode_residual"},
              {sigmas, converged, nu1, dev, amp_num, amp_an, over_num, lam_num, lam_unif, lam_an,
               resid});
  json results{{"classification", "unique-optimum"}, {"failures", json::array()}};
  for (std::size_t i = 0; i < n; ++i) {
    if (!failures[i].empty()) {
      results["failures"].push_back({{"sigma", sigmas[i]}, {"message", failures[i]}});
      std::cerr << "prcsync: sigma = " << sigmas[i] << ": " << failures[i] << '\n';
    }
  }
  finish(cfg, elapsed(start), results);
  return kOk;
}

int dispatch(const RunConfig& cfg) {
  if (cfg.command == "optimize") return cmd_optimize(cfg);
  if (cfg.command == "lyapunov") return cmd_lyapunov(cfg);
  if (cfg.command == "density") return cmd_density(cfg);
  if (cfg.command == "simulate") return cmd_simulate(cfg);
  if (cfg.command == "sweep") return cmd_sweep(cfg);
  throw InvalidArgument("unknown command '" + cfg.command + "'");
}

int report(const char* kind, const std::exception& e, int code, json extra = json::object()) {
  extra["error"] = kind;
  extra["message"] = e.what();
  extra["exit_code"] = code;
  std::cerr << extra.dump() << '\n';
  return code;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "prcsync: optimal phase-resetting curves for noise-induced synchrony.\n"
      "Canonical PRCs (--prc) have unit L2 norm: type1 = sqrt(2/3)(1 - cos 2 pi t),\n"
      "type2 = -sqrt(2) sin 2 pi t, optimal = the small-noise optimum for (a, b, c)."};
  app.set_version_flag("--version", kVersion);

  RunConfig cfg;
  std::string config_file, out_override, prc_file, sigma_list, method_list;

  app.add_option("--config", config_file, "Repeat the run described by a sidecar JSON file");
  app.add_option("--out", out_override, "Output prefix (overrides the sidecar's when rerunning)");
  app.require_subcommand(0, 1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Output prefix");
    sub->add_option("--format", cfg.format, "Table format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--sigma", cfg.sigma, "Noise amplitude");
    sub->add_option("--seed", cfg.seed, "Random seed");
  };
  auto constraint = [&](CLI::App* sub) {
    sub->add_option("--a", cfg.a, "Weight of D^2");
    sub->add_option("--b", cfg.b, "Weight of D'^2");
    sub->add_option("--c", cfg.c, "Weight of D''^2");
  };
  auto prc_opts = [&](CLI::App* sub) {
    sub->add_option("--prc", cfg.prc, "Canonical PRC: type1, type2 or optimal");
    sub->add_option("--prc-file", prc_file, "PRC as JSON {\"cos\": [...], \"sin\": [...]}");
  };

  auto* opt = app.add_subcommand("optimize", "Analytic and numerical optimal PRC side by side");
  common(opt);
  constraint(opt);
  opt->add_option("--grid", cfg.grid, "Output grid points");
  opt->add_option("--modes", cfg.modes, "Fourier modes of the BVP solver");

  auto* lya = app.add_subcommand("lyapunov", "Lyapunov exponent by several methods");
  common(lya);
  constraint(lya);
  prc_opts(lya);
  lya->add_option("--methods", method_list, "Comma list: analytic,uniform-approx,monte-carlo");
  lya->add_option("--density", cfg.method, "Density used by the analytic method")
      ->check(CLI::IsMember({"exact", "perturbative"}));
  lya->add_option("--order", cfg.order, "Perturbative density order (2 or 4)");
  lya->add_option("--grid", cfg.grid, "Density grid points");
  lya->add_option("--T", cfg.duration, "Monte Carlo duration per realisation");
  lya->add_option("--dt", cfg.dt, "Euler-Maruyama step");
  lya->add_option("--realizations", cfg.realizations, "Monte Carlo realisations");

  auto* den = app.add_subcommand("density", "Stationary phase density");
  common(den);
  constraint(den);
  prc_opts(den);
  den->add_option("--method", cfg.method, "exact, perturbative or empirical")
      ->check(CLI::IsMember({"exact", "perturbative", "empirical"}));
  den->add_option("--order", cfg.order, "Perturbative order (2 or 4)");
  den->add_option("--grid", cfg.grid, "Grid points (exact, perturbative)");
  den->add_option("--bins", cfg.bins, "Histogram bins (empirical)");
  den->add_option("--T", cfg.duration, "Simulated time after burn-in (empirical)");
  den->add_option("--burn-in", cfg.burn_in, "Discarded initial time (empirical)");
  den->add_option("--dt", cfg.dt, "Euler-Maruyama step (empirical)");

  auto* sim = app.add_subcommand("simulate", "Phase trajectory or common-noise ensemble");
  common(sim);
  constraint(sim);
  prc_opts(sim);
  sim->add_option("--T", cfg.duration, "Duration");
  sim->add_option("--dt", cfg.dt, "Euler-Maruyama step");
  sim->add_option("--theta0", cfg.theta0, "Initial phase (single path)");
  sim->add_option("--ensemble", cfg.oscillators, "Number of oscillators (0: single path)");
  sim->add_option("--record-every", cfg.record_every, "Keep every k-th step");

  auto* swp = app.add_subcommand("sweep", "Optimal PRC metrics over a list of sigma values");
  common(swp);
  constraint(swp);
  swp->add_option("--sigmas", sigma_list, "Comma list of noise amplitudes");
  swp->add_option("--modes", cfg.modes, "Fourier modes of the BVP solver");

  // Subcommand-specific defaults, before parsing overrides them.
  lya->preparse_callback([&](std::size_t) {
    cfg.duration = 5000.0;
    // The exact density rejects tangent zeros such as type1's; the series works for any PRC.
    cfg.method = "perturbative";
  });
  den->preparse_callback([&](std::size_t) { cfg.duration = 2000.0; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (!config_file.empty()) {
      const json side = read_json(config_file);
      if (!side.contains("config")) throw InvalidArgument("sidecar has no \"config\" entry");
      side.at("config").get_to(cfg);
      if (!out_override.empty()) cfg.out = out_override;
    } else {
      CLI::App* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
      if (sub == nullptr) {
        std::cerr << app.help();
        return kInadmissible;
      }
      cfg.command = sub->get_name();
      if (!out_override.empty()) cfg.out = out_override;
      if (!prc_file.empty()) {
        cfg.prc = "file";
        cfg.prc_coeffs = prc_to_json(load_prc_file(prc_file));
      }
      if (!sigma_list.empty()) {
        for (const std::string& s : split(sigma_list)) cfg.sigmas.push_back(std::stod(s));
      }
      if (!method_list.empty()) cfg.methods = split(method_list);
    }
    return dispatch(cfg);
  } catch (const InadmissibleCase& e) {
    return report("inadmissible", e, kInadmissible);
  } catch (const ConvergenceError& e) {
    return report("no-convergence", e, kNoConvergence,
                  json{{"residual", e.residual()}, {"iterations", e.iterations()}});
  } catch (const InvalidArgument& e) {
    return report("invalid-argument", e, kInadmissible);
  } catch (const DegenerateRoot& e) {
    return report("degenerate-root", e, kInadmissible);
  } catch (const UnstableStep& e) {
    return report("unstable-step", e, kInadmissible);
  } catch (const std::invalid_argument& e) {
    return report("invalid-argument", e, kInadmissible);
  } catch (const std::exception& e) {
    return report("error", e, kFailure);
  }
}
