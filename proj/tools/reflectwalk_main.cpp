// reflectwalk: batch Monte Carlo runs for reflected diffusions in smooth
// bounded domains. One flat run configuration (command + keys, overridable
// from a config file) dispatches to the PDE solvers, ergodic estimators,
// constrained samplers, and convergence studies; results are written as JSON
// (plus CSV for studies and samples).

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "reflectwalk/ergodic.hpp"
#include "reflectwalk/models.hpp"
#include "reflectwalk/pde.hpp"
#include "reflectwalk/sampling.hpp"

using json = nlohmann::ordered_json;
using namespace reflectwalk;

namespace {

struct RunConfig {
  std::string command;
  std::string problem;
  std::vector<double> h_list = {0.1};
  long long M = 10000;
  std::optional<double> T;
  std::optional<double> t0;
  std::vector<double> x0;
  std::uint64_t seed = 1;
  int workers = 0;
  long long blocks = 100;
  std::optional<double> block_length;
  double ell = 0.1;
  double beta = 1.0;
  double upsilon = 1.0;
  std::string output;
  std::string csv;
  // sampling
  std::string target = "uniform";
  bool boundary = false;
  double sigma = std::numbers::sqrt2;
  long long n_samples = 10000;
  long long burn_in = -1;
  std::string domain_kind = "ball";
  double domain_radius = 1.0;
  std::vector<double> domain_center;
  double domain_major = 4.0;
  double domain_minor = 2.0;
};

Vec to_vec(const std::vector<double>& v) {
  if (v.size() > static_cast<std::size_t>(kMaxDim))
    throw config_error("dimension exceeds the supported maximum of " + std::to_string(kMaxDim));
  Vec out(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
  return out;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

void emit(const json& doc, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open output file '" + path + "'");
    out << doc.dump(2) << "\n";
  }
}

double single_h(const RunConfig& cfg) {
  if (cfg.h_list.size() != 1)
    throw config_error("this command takes a single --h value");
  if (!(cfg.h_list[0] > 0.0)) throw config_error("--h must be positive");
  return cfg.h_list[0];
}

struct Resolved {
  ProblemCatalogEntry entry;
  double t0;
  double T;
  Vec x0;
  bool at_defaults;  // reference values only apply at the cataloged point
};

Resolved resolve(const RunConfig& cfg, bool uses_horizon) {
  if (cfg.problem.empty()) throw config_error("missing --problem");
  Resolved r{catalog(cfg.problem), 0.0, 0.0, Vec(), true};
  r.t0 = cfg.t0.value_or(r.entry.t0);
  r.T = cfg.T.value_or(r.entry.T);
  r.x0 = cfg.x0.empty() ? r.entry.x0 : to_vec(cfg.x0);
  if (uses_horizon && r.entry.horizon_fixed && cfg.T && *cfg.T != r.entry.T)
    throw config_error("problem '" + cfg.problem +
                       "' has a fixed horizon T = " + std::to_string(r.entry.T) +
                       " baked into its coefficients; drop --T");
  r.at_defaults = (r.t0 == r.entry.t0) && ((r.x0 - r.entry.x0).norm() == 0.0);
  return r;
}

json base_doc(const RunConfig& cfg) {
  json doc;
  doc["command"] = cfg.command;
  doc["problem"] = cfg.problem;
  doc["parameters"] = json::object();
  return doc;
}

void attach_exact(json& doc, std::optional<double> exact, double estimate) {
  if (exact) {
    doc["exact"] = *exact;
    doc["abs_error"] = std::abs(estimate - *exact);
  }
}

// Least-squares slope of log|error| against log h, with its standard error
// when three or more points are available.
struct SlopeFit {
  double slope = 0.0;
  std::optional<double> slope_stderr;
};

SlopeFit fit_loglog(const std::vector<double>& hs, const std::vector<double>& errs) {
  const std::size_t n = hs.size();
  if (n < 2) throw config_error("convergence study needs at least two step sizes");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += std::log(hs[i]);
    sy += std::log(errs[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(hs[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(errs[i]) - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  if (n >= 3) {
    double ss_res = 0;
    const double intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < n; ++i) {
      const double resid = std::log(errs[i]) - (intercept + fit.slope * std::log(hs[i]));
      ss_res += resid * resid;
    }
    fit.slope_stderr = std::sqrt(ss_res / (n - 2) / sxx);
  }
  return fit;
}

int run_solve_parabolic(const RunConfig& cfg) {
  const Resolved r = resolve(cfg, true);
  const double h = single_h(cfg);
  const McResult res =
      solve_parabolic(r.entry.problem, r.t0, r.x0, r.T, h, cfg.M, cfg.seed, cfg.workers);
  json doc = base_doc(cfg);
  doc["parameters"] = {{"h", res.h},           {"M", res.M},       {"T", r.T},
                       {"t0", r.t0},           {"x0", vec_json(r.x0)},
                       {"seed", cfg.seed},     {"workers", cfg.workers}};
  doc["estimate"] = res.estimate;
  doc["mc_error"] = res.mc_error;
  if (r.at_defaults) attach_exact(doc, r.entry.exact.solution, res.estimate);
  doc["wall_time"] = res.wall_time;
  doc["seed"] = cfg.seed;
  emit(doc, cfg.output);
  return 0;
}

int run_solve_elliptic(const RunConfig& cfg) {
  const Resolved r = resolve(cfg, false);
  const double h = single_h(cfg);
  const McResult res =
      solve_elliptic_decay(r.entry.problem, r.x0, r.T, h, cfg.M, cfg.seed, cfg.workers);
  json doc = base_doc(cfg);
  doc["parameters"] = {{"h", res.h},        {"M", res.M},       {"T", r.T},
                       {"x0", vec_json(r.x0)}, {"seed", cfg.seed}, {"workers", cfg.workers}};
  doc["estimate"] = res.estimate;
  doc["mc_error"] = res.mc_error;
  if (r.at_defaults) attach_exact(doc, r.entry.exact.solution, res.estimate);
  doc["wall_time"] = res.wall_time;
  doc["seed"] = cfg.seed;
  emit(doc, cfg.output);
  return 0;
}

int run_solve_poisson(const RunConfig& cfg) {
  const Resolved r = resolve(cfg, false);
  const double h = single_h(cfg);
  const Schedule schedule = poisson_schedule(h, cfg.ell, cfg.beta, cfg.upsilon, r.T);
  const McResult res =
      solve_poisson(r.entry.problem, r.x0, schedule, cfg.M, cfg.seed, cfg.workers);
  json doc = base_doc(cfg);
  doc["parameters"] = {{"h", h},
                       {"ell", cfg.ell},
                       {"beta", cfg.beta},
                       {"upsilon", cfg.upsilon},
                       {"T", r.T},
                       {"M", res.M},
                       {"x0", vec_json(r.x0)},
                       {"seed", cfg.seed},
                       {"workers", cfg.workers}};
  doc["schedule"] = {{"Lambda", schedule.Lambda}, {"total_steps", schedule.total_steps()}};
  doc["estimate"] = res.estimate;
  doc["mc_error"] = res.mc_error;
  if (r.at_defaults) attach_exact(doc, r.entry.exact.solution, res.estimate);
  doc["wall_time"] = res.wall_time;
  doc["seed"] = cfg.seed;
  emit(doc, cfg.output);
  return 0;
}

int run_ergodic(const RunConfig& cfg) {
  const Resolved r = resolve(cfg, false);
  const double h = single_h(cfg);
  long long blocks = cfg.blocks;
  if (cfg.block_length) {
    if (!(*cfg.block_length > 0.0)) throw config_error("--block-length must be positive");
    blocks = std::max<long long>(1, static_cast<long long>(std::floor(r.T / *cfg.block_length)));
  }
  const TimeAverageRun run = time_average(r.entry.problem, r.T, h, blocks, r.x0, cfg.seed);
  const TimeAverages& ta = run.averages;

  json doc = base_doc(cfg);
  doc["parameters"] = {{"h", run.h},           {"T", r.T},         {"blocks", run.blocks},
                       {"x0", vec_json(r.x0)}, {"seed", cfg.seed}, {"steps", run.steps}};
  json est = {{"phi_hat", ta.phi_hat}, {"kappa_hat", ta.kappa_hat}, {"psi_hat", ta.psi_hat}};
  if (ta.psi_prime_hat) est["psi_prime_hat"] = *ta.psi_prime_hat;
  if (ta.psi_tilde_hat) est["psi_tilde_hat"] = *ta.psi_tilde_hat;
  doc["estimates"] = est;
  json serr = json::object();
  if (ta.phi_stat_err) serr["phi_hat"] = *ta.phi_stat_err;
  if (ta.kappa_stat_err) serr["kappa_hat"] = *ta.kappa_stat_err;
  if (ta.psi_stat_err) serr["psi_hat"] = *ta.psi_stat_err;
  if (ta.psi_prime_stat_err) serr["psi_prime_hat"] = *ta.psi_prime_stat_err;
  if (ta.psi_tilde_stat_err) serr["psi_tilde_hat"] = *ta.psi_tilde_stat_err;
  doc["stat_err"] = serr;
  json exact = json::object(), abs_error = json::object();
  if (r.entry.exact.phi_bar) {
    exact["phi_bar"] = *r.entry.exact.phi_bar;
    abs_error["phi_hat"] = std::abs(ta.phi_hat - *r.entry.exact.phi_bar);
  }
  if (r.entry.exact.kappa) {
    exact["kappa"] = *r.entry.exact.kappa;
    abs_error["kappa_hat"] = std::abs(ta.kappa_hat - *r.entry.exact.kappa);
  }
  if (r.entry.exact.psi_prime_bar && ta.psi_prime_hat) {
    exact["psi_prime_bar"] = *r.entry.exact.psi_prime_bar;
    abs_error["psi_prime_hat"] = std::abs(*ta.psi_prime_hat - *r.entry.exact.psi_prime_bar);
  }
  if (!exact.empty()) {
    doc["exact"] = exact;
    doc["abs_error"] = abs_error;
  }
  doc["wall_time"] = run.wall_time;
  doc["seed"] = cfg.seed;
  emit(doc, cfg.output);
  return 0;
}

int run_ensemble(const RunConfig& cfg) {
  const Resolved r = resolve(cfg, false);
  const double h = single_h(cfg);
  const McResult phi =
      ensemble_phi(r.entry.problem, r.x0, r.T, h, cfg.M, cfg.seed, cfg.workers);
  json doc = base_doc(cfg);
  doc["parameters"] = {{"h", phi.h},           {"T", r.T},         {"M", cfg.M},
                       {"x0", vec_json(r.x0)}, {"seed", cfg.seed}, {"workers", cfg.workers}};
  json est = {{"phi", phi.estimate}};
  json err = {{"phi", phi.mc_error}};
  double wall = phi.wall_time;
  if (r.entry.has_boundary_observable) {
    const EnsembleBoundary eb =
        ensemble_boundary(r.entry.problem, r.x0, r.T, h, cfg.M, cfg.seed, cfg.workers);
    if (eb.ratio_of_means) est["psi_prime_ratio_of_means"] = *eb.ratio_of_means;
    if (eb.mean_of_ratios) {
      est["psi_prime_mean_of_ratios"] = eb.mean_of_ratios->mean;
      err["psi_prime_mean_of_ratios"] = eb.mean_of_ratios->ci_halfwidth;
    }
    wall += eb.wall_time;
  }
  doc["estimates"] = est;
  doc["mc_error"] = err;
  json exact = json::object(), abs_error = json::object();
  if (r.entry.exact.phi_bar) {
    exact["phi_bar"] = *r.entry.exact.phi_bar;
    abs_error["phi"] = std::abs(phi.estimate - *r.entry.exact.phi_bar);
  }
  if (r.entry.exact.psi_prime_bar && est.contains("psi_prime_ratio_of_means")) {
    exact["psi_prime_bar"] = *r.entry.exact.psi_prime_bar;
    abs_error["psi_prime_ratio_of_means"] =
        std::abs(est["psi_prime_ratio_of_means"].get<double>() - *r.entry.exact.psi_prime_bar);
  }
  if (!exact.empty()) {
    doc["exact"] = exact;
    doc["abs_error"] = abs_error;
  }
  doc["wall_time"] = wall;
  doc["seed"] = cfg.seed;
  emit(doc, cfg.output);
  return 0;
}

int run_sample(const RunConfig& cfg) {
  const double h = single_h(cfg);
  Domain domain = Domain::ball(vec2(0, 0), 1.0);
  VectorField grad;
  std::optional<Vec> start;
  if (cfg.target == "uniform" || cfg.target == "gaussian") {
    if (cfg.domain_kind == "ball") {
      std::vector<double> center = cfg.domain_center;
      if (center.empty()) center = {0.0, 0.0};
      domain = Domain::ball(to_vec(center), cfg.domain_radius);
    } else if (cfg.domain_kind == "torus3d") {
      domain = Domain::torus3d(cfg.domain_major, cfg.domain_minor);
    } else {
      throw config_error("unknown domain kind '" + cfg.domain_kind + "' (ball | torus3d)");
    }
    const int d = domain.dimension();
    if (cfg.target == "uniform")
      grad = [d](const Vec&) { return Vec(Vec::Zero(d)); };
    else
      grad = [](const Vec& x) { return Vec((-x).eval()); };
  } else if (cfg.target.rfind("von_mises", 0) == 0 || cfg.target == "fisher") {
    const ProblemCatalogEntry entry =
        catalog(cfg.target == "fisher" ? "fisher3d" : cfg.target);
    domain = entry.problem.domain;
    // The catalog problem's drift is (sigma^2/2) grad log rho with sigma^2 = 2.
    const RsdeProblem p = entry.problem;
    grad = [p](const Vec& x) { return p.drift(0.0, x); };
    start = entry.x0;
  } else {
    throw config_error("unknown target '" + cfg.target +
                       "' (uniform | gaussian | von_mises[:beta] | fisher)");
  }
  if (!cfg.x0.empty()) start = to_vec(cfg.x0);

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!cfg.output.empty() && cfg.output != "-") {
    file.open(cfg.output);
    if (!file) throw config_error("cannot open output file '" + cfg.output + "'");
    os = &file;
  }
  os->precision(17);

  const int d = domain.dimension();
  auto header = [&](bool weight) {
    for (int i = 0; i < d; ++i) *os << (i ? "," : "") << "x" << (i + 1);
    if (weight) *os << ",weight";
    *os << "\n";
  };
  if (cfg.boundary) {
    const double T = cfg.T.value_or(1000.0);
    const auto samples = sample_boundary(grad, domain, cfg.sigma, h, T, cfg.seed, start);
    header(true);
    for (const auto& s : samples) {
      for (int i = 0; i < d; ++i) *os << (i ? "," : "") << s.z[i];
      *os << "," << s.weight << "\n";
    }
  } else {
    const auto samples =
        sample_interior(grad, domain, cfg.sigma, h, cfg.n_samples, cfg.burn_in, cfg.seed, start);
    header(false);
    for (const auto& x : samples) {
      for (int i = 0; i < d; ++i) *os << (i ? "," : "") << x[i];
      *os << "\n";
    }
  }
  return 0;
}

int run_convergence_study(const RunConfig& cfg) {
  if (cfg.h_list.size() < 2)
    throw config_error("convergence-study needs --h with at least two comma-separated values");
  const Resolved r = resolve(cfg, true);

  json rows = json::array();
  std::vector<double> hs, errs;
  std::ostringstream csv;
  csv.precision(17);
  csv << "h,estimate,mc_error,abs_error\n";
  double wall = 0.0;
  for (const double h : cfg.h_list) {
    if (!(h > 0.0)) throw config_error("--h values must be positive");
    double estimate = 0.0, mc_error = 0.0;
    std::optional<double> exact;
    switch (r.entry.problem_kind) {
      case ProblemKind::parabolic: {
        const McResult res =
            solve_parabolic(r.entry.problem, r.t0, r.x0, r.T, h, cfg.M, cfg.seed, cfg.workers);
        estimate = res.estimate;
        mc_error = res.mc_error;
        exact = r.entry.exact.solution;
        wall += res.wall_time;
        break;
      }
      case ProblemKind::elliptic: {
        const McResult res =
            solve_elliptic_decay(r.entry.problem, r.x0, r.T, h, cfg.M, cfg.seed, cfg.workers);
        estimate = res.estimate;
        mc_error = res.mc_error;
        exact = r.entry.exact.solution;
        wall += res.wall_time;
        break;
      }
      case ProblemKind::poisson: {
        const Schedule s = poisson_schedule(h, cfg.ell, cfg.beta, cfg.upsilon, r.T);
        const McResult res =
            solve_poisson(r.entry.problem, r.x0, s, cfg.M, cfg.seed, cfg.workers);
        estimate = res.estimate;
        mc_error = res.mc_error;
        exact = r.entry.exact.solution;
        wall += res.wall_time;
        break;
      }
      case ProblemKind::ergodic_interior: {
        const TimeAverageRun run =
            time_average(r.entry.problem, r.T, h, cfg.blocks, r.x0, cfg.seed);
        estimate = run.averages.phi_hat;
        mc_error = run.averages.phi_stat_err.value_or(0.0);
        exact = r.entry.exact.phi_bar;
        wall += run.wall_time;
        break;
      }
      case ProblemKind::ergodic_boundary: {
        const TimeAverageRun run =
            time_average(r.entry.problem, r.T, h, cfg.blocks, r.x0, cfg.seed);
        if (!run.averages.psi_prime_hat)
          throw numeric_error("no boundary mass accumulated at h = " + std::to_string(h));
        estimate = *run.averages.psi_prime_hat;
        mc_error = run.averages.psi_prime_stat_err.value_or(0.0);
        exact = r.entry.exact.psi_prime_bar;
        wall += run.wall_time;
        break;
      }
    }
    if (!exact) throw config_error("problem '" + cfg.problem + "' has no reference value");
    const double abs_error = std::abs(estimate - *exact);
    hs.push_back(h);
    errs.push_back(abs_error);
    rows.push_back({{"h", h},
                    {"estimate", estimate},
                    {"mc_error", mc_error},
                    {"abs_error", abs_error}});
    csv << h << "," << estimate << "," << mc_error << "," << abs_error << "\n";
  }

  const SlopeFit fit = fit_loglog(hs, errs);
  json doc = base_doc(cfg);
  doc["parameters"] = {{"h_list", cfg.h_list}, {"M", cfg.M},       {"T", r.T},
                       {"x0", vec_json(r.x0)}, {"seed", cfg.seed}, {"workers", cfg.workers}};
  doc["rows"] = rows;
  doc["slope"] = fit.slope;
  if (fit.slope_stderr) doc["slope_stderr"] = *fit.slope_stderr;
  doc["wall_time"] = wall;
  doc["seed"] = cfg.seed;
  emit(doc, cfg.output);
  if (!cfg.csv.empty()) {
    std::ofstream out(cfg.csv);
    if (!out) throw config_error("cannot open csv file '" + cfg.csv + "'");
    out << csv.str();
  } else {
    std::cout << csv.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Monte Carlo engine for reflected diffusions in smooth bounded domains:\n"
      "PDE solvers with Robin/Neumann boundary conditions, ergodic averages in\n"
      "the domain and on its boundary, and constrained samplers."};
  // Help lives on --help only; --h is the time step.
  app.set_help_flag("--help", "print help");
  app.set_config("--config", "", "flat key=value config file; flags win");
  app.allow_config_extras(false);

  RunConfig cfg;
  const std::set<std::string> commands = {"solve-parabolic", "solve-elliptic", "solve-poisson",
                                          "ergodic",         "ensemble",       "sample",
                                          "convergence-study"};
  app.add_option("command", cfg.command,
                 "solve-parabolic | solve-elliptic | solve-poisson | ergodic | ensemble | "
                 "sample | convergence-study")
      ->required()
      ->check(CLI::IsMember(commands));
  app.add_option("--problem", cfg.problem, "catalog problem name");
  app.add_option("--h", cfg.h_list, "time step (comma list for convergence-study)")
      ->delimiter(',');
  app.add_option("--M", cfg.M, "number of trajectories")->check(CLI::PositiveNumber);
  app.add_option("--T", cfg.T, "horizon / trajectory length");
  app.add_option("--t0", cfg.t0, "start time (parabolic)");
  app.add_option("--x0", cfg.x0, "start / evaluation point");
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--workers", cfg.workers,
                 "worker threads (0: REFLECTWALK_WORKERS or hardware)");
  app.add_option("--blocks", cfg.blocks, "batch-means blocks (ergodic)")
      ->check(CLI::PositiveNumber);
  app.add_option("--block-length", cfg.block_length, "block length; overrides --blocks");
  app.add_option("--ell", cfg.ell, "schedule block-length exponent (poisson)")
      ->check(CLI::PositiveNumber);
  app.add_option("--beta", cfg.beta, "schedule step-decay exponent (poisson)")
      ->check(CLI::PositiveNumber);
  app.add_option("--upsilon", cfg.upsilon, "schedule base block length (poisson)")
      ->check(CLI::PositiveNumber);
  app.add_option("--output", cfg.output, "output path for the JSON/CSV document");
  app.add_option("--csv", cfg.csv, "CSV path for convergence-study rows");
  app.add_option("--target", cfg.target,
                 "sampling target: uniform | gaussian | von_mises[:beta] | fisher");
  app.add_flag("--boundary", cfg.boundary, "emit weighted boundary samples");
  app.add_option("--sigma", cfg.sigma, "sampler noise scale")->check(CLI::PositiveNumber);
  app.add_option("--n", cfg.n_samples, "interior samples")->check(CLI::PositiveNumber);
  app.add_option("--burn-in", cfg.burn_in, "burn-in steps (default ceil(10/h))");
  app.add_option("--domain-kind", cfg.domain_kind, "sampling domain: ball | torus3d");
  app.add_option("--domain-radius", cfg.domain_radius, "ball radius")
      ->check(CLI::PositiveNumber);
  app.add_option("--domain-center", cfg.domain_center, "ball center");
  app.add_option("--domain-major", cfg.domain_major, "torus major radius")
      ->check(CLI::PositiveNumber);
  app.add_option("--domain-minor", cfg.domain_minor, "torus minor radius")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
    if (cfg.command == "solve-parabolic") return run_solve_parabolic(cfg);
    if (cfg.command == "solve-elliptic") return run_solve_elliptic(cfg);
    if (cfg.command == "solve-poisson") return run_solve_poisson(cfg);
    if (cfg.command == "ergodic") return run_ergodic(cfg);
    if (cfg.command == "ensemble") return run_ensemble(cfg);
    if (cfg.command == "sample") return run_sample(cfg);
    if (cfg.command == "convergence-study") return run_convergence_study(cfg);
    return 2;  // unreachable: the command is validated by the parser
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    json err = {{"error", {{"kind", "config"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 2;
  } catch (const usage_error& e) {
    json err = {{"error", {{"kind", "usage"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 2;
  } catch (const model_error& e) {
    json err = {{"error", {{"kind", "model"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 1;
  } catch (const numeric_error& e) {
    json err = {{"error", {{"kind", "numeric"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    json err = {{"error", {{"kind", "internal"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 1;
  }
}
