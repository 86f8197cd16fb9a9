#include "reflectwalk/ergodic.hpp"

#include <chrono>
#include <cmath>

namespace reflectwalk {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Batch-means statistic over block values: J_L = (1/L)((1/(L-1)) sum f_i^2 - fbar^2).
std::optional<double> batch_halfwidth(const std::vector<double>& f) {
  const std::size_t L = f.size();
  if (L < 2) return std::nullopt;
  double sum = 0.0, sum_sq = 0.0;
  for (double v : f) {
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(L);
  const double j =
      (sum_sq / static_cast<double>(L - 1) - mean * mean) / static_cast<double>(L);
  return 2.0 * std::sqrt(std::max(0.0, j));
}

}  // namespace

void accumulate(ErgodicAccumulator& acc, const StepEvent& event, const Vec& x_k,
                const ScalarField& phi, const ScalarField& psi, const ContactWeight& alpha_at) {
  acc.sum_phi += phi(x_k);
  if (event.reflected) {
    const double r = event.contact.r;
    const double a = alpha_at(event.contact);
    if (!(a > 0.0)) throw model_error("co-normal weight must be positive");
    const double p = psi(event.contact.x_pi);
    const double w = r / a;
    acc.sum_w += w;
    acc.sum_wpsi += w * p;
    acc.sum_r += r;
    acc.sum_rpsi += r * p;
  }
  ++acc.n_steps;
}

TimeAverages finalize(const ErgodicAccumulator& acc) {
  if (acc.n_steps < 1) throw usage_error("finalize: empty accumulator");
  if (!(acc.h > 0.0)) throw usage_error("finalize: accumulator step size not set");
  TimeAverages out;
  const double n = static_cast<double>(acc.n_steps);
  out.phi_hat = acc.sum_phi / n;
  out.kappa_hat = 2.0 * acc.sum_w / (n * acc.h);
  out.psi_hat = 2.0 * acc.sum_wpsi / (n * acc.h);
  if (acc.sum_w > 0.0) out.psi_prime_hat = acc.sum_wpsi / acc.sum_w;
  if (acc.sum_r > 0.0) out.psi_tilde_hat = acc.sum_rpsi / acc.sum_r;

  // Per-block estimates from consecutive snapshot differences.
  std::vector<double> f_phi, f_kappa, f_psi, f_psi_prime, f_psi_tilde;
  ErgodicAccumulator::Snapshot prev{0, 0.0, 0.0, 0.0, 0.0, 0.0};
  for (const auto& snap : acc.blocks) {
    const double dn = static_cast<double>(snap.n_steps - prev.n_steps);
    if (dn > 0.0) {
      const double dw = snap.sum_w - prev.sum_w;
      const double dwpsi = snap.sum_wpsi - prev.sum_wpsi;
      const double dr = snap.sum_r - prev.sum_r;
      const double drpsi = snap.sum_rpsi - prev.sum_rpsi;
      f_phi.push_back((snap.sum_phi - prev.sum_phi) / dn);
      f_kappa.push_back(2.0 * dw / (dn * acc.h));
      f_psi.push_back(2.0 * dwpsi / (dn * acc.h));
      if (dw > 0.0) f_psi_prime.push_back(dwpsi / dw);
      if (dr > 0.0) f_psi_tilde.push_back(drpsi / dr);
    }
    prev = snap;
  }
  out.phi_stat_err = batch_halfwidth(f_phi);
  out.kappa_stat_err = batch_halfwidth(f_kappa);
  out.psi_stat_err = batch_halfwidth(f_psi);
  out.psi_prime_stat_err = batch_halfwidth(f_psi_prime);
  out.psi_tilde_stat_err = batch_halfwidth(f_psi_tilde);
  return out;
}

TimeAverageRun time_average(const RsdeProblem& problem, double T, double h, long long blocks,
                            const Vec& x0, std::uint64_t seed) {
  if (!(T > 0.0) || !(h > 0.0)) throw config_error("time_average: need T > 0 and h > 0");
  if (blocks < 1) throw config_error("time_average: need at least one block");
  const long long n_total = static_cast<long long>(std::ceil(T / h - 1e-9));
  if (blocks > n_total) throw config_error("time_average: more blocks than steps");
  if (problem.domain.signed_distance(x0) < -1e-10)
    throw usage_error("time_average: start point is outside the domain");
  const auto t_start = std::chrono::steady_clock::now();

  const long long per_block = n_total / blocks;
  const long long n = per_block * blocks;  // horizon snapped down to full blocks
  const int d = problem.dim;

  const ContactWeight weight = [&problem](const BoundaryContact& c) {
    return alpha(problem, c);
  };
  const ScalarField phi = problem.terminal;
  const ScalarField psi = [&problem](const Vec& z) { return problem.robin_data(0.0, z); };

  ErgodicAccumulator acc;
  acc.h = h;
  RngStream stream(seed, 0);
  double t = 0.0;
  Vec x = x0;
  for (long long k = 0; k < n; ++k) {
    const Vec xi = bernoulli_pm1(stream, d);
    const Vec x_k = x;
    const StepEvent ev = step_reflected(problem, t, x, h, xi);
    accumulate(acc, ev, x_k, phi, psi, weight);
    if ((k + 1) % per_block == 0) acc.snapshot();
  }

  TimeAverageRun run;
  run.averages = finalize(acc);
  run.steps = n;
  run.h = h;
  run.blocks = blocks;
  run.wall_time = seconds_since(t_start);
  return run;
}

namespace {

struct BoundarySums {
  McAccumulator numerator;    // sum over the first N-1 steps of r psi / alpha
  McAccumulator denominator;  // sum over the first N-1 steps of r / alpha
  McAccumulator ratio;        // full-trajectory ratio, when defined
  long long with_mass = 0;

  void merge(const BoundarySums& o) {
    numerator.merge(o.numerator);
    denominator.merge(o.denominator);
    ratio.merge(o.ratio);
    with_mass += o.with_mass;
  }
};

}  // namespace

EnsembleBoundary ensemble_boundary(const RsdeProblem& problem, const Vec& x0, double T, double h,
                                   long long M, std::uint64_t seed, int workers) {
  if (!(T > 0.0) || !(h > 0.0) || M < 1)
    throw config_error("ensemble_boundary: need T > 0, h > 0, M >= 1");
  if (problem.domain.signed_distance(x0) < -1e-10)
    throw usage_error("ensemble_boundary: start point is outside the domain");
  const auto t_start = std::chrono::steady_clock::now();
  const long long n = static_cast<long long>(std::ceil(T / h - 1e-9));
  const double h_eff = T / static_cast<double>(n);
  const int d = problem.dim;
  const ScalarField psi = [&problem](const Vec& z) { return problem.robin_data(0.0, z); };

  auto body = [&](long long, RngStream& stream, BoundarySums& out) {
    double t = 0.0;
    Vec x = x0;
    double s1 = 0.0, s2 = 0.0;        // full sums, k = 0 .. N-1
    double s1m = 0.0, s2m = 0.0;      // sums over k = 0 .. N-2
    for (long long k = 0; k < n; ++k) {
      const Vec xi = bernoulli_pm1(stream, d);
      const StepEvent ev = step_reflected(problem, t, x, h_eff, xi);
      if (ev.reflected) {
        const double a = alpha(problem, ev.contact);
        const double w = ev.contact.r / a;
        const double wp = w * psi(ev.contact.x_pi);
        s1 += wp;
        s2 += w;
        if (k < n - 1) {
          s1m += wp;
          s2m += w;
        }
      }
    }
    out.numerator.add(s1m);
    out.denominator.add(s2m);
    if (s2 > 0.0) {
      out.ratio.add(s1 / s2);
      ++out.with_mass;
    }
  };

  const BoundarySums sums =
      parallel_reduce<BoundarySums>(seed, M, resolve_workers(workers), body);

  EnsembleBoundary out;
  out.M = M;
  out.trajectories_with_mass = sums.with_mass;
  if (sums.denominator.sum > 0.0)
    out.ratio_of_means = sums.numerator.sum / sums.denominator.sum;
  out.mean_of_ratios = mc_mean(sums.ratio);
  out.wall_time = seconds_since(t_start);
  return out;
}

McResult ensemble_phi(const RsdeProblem& problem, const Vec& x0, double T, double h, long long M,
                      std::uint64_t seed, int workers) {
  if (!(T > 0.0) || !(h > 0.0) || M < 1)
    throw config_error("ensemble_phi: need T > 0, h > 0, M >= 1");
  if (problem.domain.signed_distance(x0) < -1e-10)
    throw usage_error("ensemble_phi: start point is outside the domain");
  const auto t_start = std::chrono::steady_clock::now();
  const long long n = static_cast<long long>(std::ceil(T / h - 1e-9));
  const double h_eff = T / static_cast<double>(n);
  const int d = problem.dim;

  auto body = [&](long long, RngStream& stream, McAccumulator& acc) {
    double t = 0.0;
    Vec x = x0;
    for (long long k = 0; k < n; ++k) {
      const Vec xi = bernoulli_pm1(stream, d);
      step_reflected(problem, t, x, h_eff, xi);
    }
    acc.add(problem.terminal(x));
  };

  const McAccumulator acc = parallel_reduce<McAccumulator>(seed, M, resolve_workers(workers), body);
  const McStats stats = *mc_mean(acc);
  McResult res;
  res.estimate = stats.mean;
  res.mc_error = stats.ci_halfwidth;
  res.M = M;
  res.h = h_eff;
  res.seed = seed;
  res.wall_time = seconds_since(t_start);
  return res;
}

}  // namespace reflectwalk
