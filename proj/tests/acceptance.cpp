// Acceptance suite: end-to-end checks of the solvers and estimators against
// their reference values and invariants. Prints one PASS/FAIL line per
// criterion and exits nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "reflectwalk/ergodic.hpp"
#include "reflectwalk/models.hpp"
#include "reflectwalk/pde.hpp"
#include "reflectwalk/sampling.hpp"

using namespace reflectwalk;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", index, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double x, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, x);
  return buf;
}

// Independent least-squares slope of log(err) against log(h).
double loglog_slope(const std::vector<double>& hs, const std::vector<double>& errs) {
  const std::size_t n = hs.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(hs[i]);
    my += std::log(errs[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(hs[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(errs[i]) - my);
  }
  return sxy / sxx;
}

// 1. Parabolic Robin solver against the reference error table.
void criterion_parabolic() {
  const auto entry = catalog("exp8_1");
  const double exact = *entry.exact.solution;
  const std::vector<double> hs = {0.1, 0.05, 0.025, 0.0125};
  // Reference absolute errors and the Monte Carlo sigma of the runs behind
  // them (half of the tabulated 95% halfwidths).
  const double ref_err[4] = {1.9445, 0.9917, 0.5125, 0.2592};
  const double ref_sigma[4] = {0.0281, 0.0092, 0.00935, 0.00935};

  bool pass = true;
  std::ostringstream detail;
  std::vector<double> errs;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const McResult r = solve_parabolic(entry.problem, 0.0, entry.x0, 1.0, hs[i], 100000, 101);
    const double err = std::abs(r.estimate - exact);
    errs.push_back(err);
    const double sigma = std::sqrt(r.mc_error * r.mc_error / 4.0 + ref_sigma[i] * ref_sigma[i]);
    const bool ok = std::abs(err - ref_err[i]) <= 3.0 * sigma;
    pass = pass && ok;
    detail << "\n    h=" << fmt(hs[i]) << " est=" << fmt(r.estimate) << " |err|=" << fmt(err)
           << " vs reference " << fmt(ref_err[i]) << " (3-sigma window " << fmt(3.0 * sigma)
           << (ok ? ", ok)" : ", MISMATCH)");
  }
  const double slope = loglog_slope(hs, errs);
  const bool slope_ok = slope >= 0.85 && slope <= 1.15;
  pass = pass && slope_ok;
  detail << "\n    slope=" << fmt(slope, 3) << " (window [0.85, 1.15])";
  if (!pass)
    detail << "\n    note: a faithful run to T integrates the boundary data exactly as "
              "specified and lands near the exact value from this start point; the "
              "reference error column is reproduced bit-for-bit only by a run stopped "
              "one step short of T (see decisions log).";
  report(1, "parabolic Robin solver vs reference table", pass, detail.str());
}

// 2. Interior ergodic average: value window and observed order.
void criterion_ergodic_interior() {
  const auto entry = catalog("exp8_2");
  const double exact = *entry.exact.phi_bar;

  const auto run = time_average(entry.problem, 2.0e4, 0.1, 100, entry.x0, 102);
  const double err = std::abs(run.averages.phi_hat - exact);
  const bool value_ok = err >= 0.02 && err <= 0.09;

  std::vector<double> hs = {0.4, 0.25, 0.2, 0.1}, errs;
  for (const double h : hs) {
    const auto r = time_average(entry.problem, 1.0e5, h, 100, entry.x0, 102);
    errs.push_back(std::abs(r.averages.phi_hat - exact));
  }
  const double slope = loglog_slope(hs, errs);
  const bool slope_ok = slope >= 0.8 && slope <= 1.2;

  std::ostringstream detail;
  detail << "phi_hat err=" << fmt(err) << " (window [0.02, 0.09]"
         << (value_ok ? ", ok)" : ", MISMATCH)") << "; slope=" << fmt(slope, 3)
         << " (window [0.8, 1.2]" << (slope_ok ? ")" : ", MISMATCH)");
  if (!slope_ok)
    detail << "\n    note: the reference table's own errors (.2850/.1688/.1299/.0496) give "
              "slope 1.27 over this h range; the pre-asymptotic bend at h=0.4 pushes the "
              "fit above the stated window (see decisions log).";
  report(2, "interior ergodic time-averaging", value_ok && slope_ok, detail.str());
}

// 3. Boundary ergodic limits on the sphere.
void criterion_ergodic_boundary() {
  const auto entry = catalog("exp8_3");
  const auto run = time_average(entry.problem, 3.0e4, 0.05, 100, entry.x0, 103);
  const double kappa_err = std::abs(run.averages.kappa_hat - 3.0);
  const double psi_err = std::abs(run.averages.psi_prime_hat.value_or(1e9) - 0.53438);
  const bool pass = kappa_err <= 0.10 && psi_err <= 0.045;
  std::ostringstream detail;
  detail << "kappa_hat=" << fmt(run.averages.kappa_hat) << " (|err|=" << fmt(kappa_err)
         << " <= 0.10), psi_prime_hat=" << fmt(run.averages.psi_prime_hat.value_or(0.0), 5)
         << " (|err|=" << fmt(psi_err, 5) << " <= 0.045)";
  report(3, "boundary ergodic limits", pass, detail.str());
}

// 4. Elliptic solver with decay against the reference window.
void criterion_elliptic() {
  const auto entry = catalog("exp8_4");
  const McResult r = solve_elliptic_decay(entry.problem, entry.x0, 4.0, 0.1, 1000000, 104);
  const double err = std::abs(r.estimate - 5.125);
  const bool pass = err >= 0.30 && err <= 0.48;
  std::ostringstream detail;
  detail << "est=" << fmt(r.estimate) << " +-" << fmt(r.mc_error) << ", |err|=" << fmt(err)
         << " (window [0.30, 0.48]" << (pass ? ")" : ", MISMATCH)");
  if (!pass)
    detail << "\n    note: the solver's error decays at first order (0.626, 0.418, 0.234, "
              "0.126, 0.065 for h = 0.1 .. 0.00625) but with a larger constant than the "
              "reference run's 0.3894 at h=0.1 (see decisions log).";
  report(4, "elliptic solver with decay", pass, detail.str());
}

// 5. Adaptive double-partition solver for the zero-decay Neumann problem.
void criterion_poisson() {
  const auto entry = catalog("exp8_5");
  const double exact = *entry.exact.solution;
  const std::vector<double> hs = {0.5, 0.4, 0.3, 0.2};
  const double ref_err[4] = {1.155, 0.812, 0.568, 0.372};
  const double ref_sigma[4] = {0.0555, 0.0175, 0.017, 0.0175};

  bool pass = true;
  std::ostringstream detail;
  std::vector<double> errs;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const Schedule s = poisson_schedule(hs[i], 0.1, 1.0, 1.0, 5.0);
    const McResult r = solve_poisson(entry.problem, entry.x0, s, 100000, 105);
    const double err = std::abs(r.estimate - exact);
    errs.push_back(err);
    const double sigma = std::sqrt(r.mc_error * r.mc_error / 4.0 + ref_sigma[i] * ref_sigma[i]);
    const bool ok = std::abs(err - ref_err[i]) <= 3.0 * sigma;
    pass = pass && ok;
    detail << "\n    h=" << fmt(hs[i], 1) << " est=" << fmt(r.estimate, 3)
           << " |err|=" << fmt(err, 3) << " vs reference " << fmt(ref_err[i], 3)
           << " (3-sigma window " << fmt(3.0 * sigma, 3) << (ok ? ", ok)" : ", MISMATCH)");
  }
  const double slope = loglog_slope(hs, errs);
  const bool slope_ok = slope >= 0.8 && slope <= 1.3;
  pass = pass && slope_ok;
  detail << "\n    slope=" << fmt(slope, 3) << " (window [0.8, 1.3])";
  report(5, "adaptive zero-decay Neumann solver", pass, detail.str());
}

// 6. Second-order scheme: self-convergence ratio near 4.
void criterion_second_order() {
  const auto entry = catalog("exp8_1");
  const Vec x0 = vec2(3.9, 0.0);  // wall start makes the h^2 bias measurable
  const double T = 1.0;
  const auto phi = [](const Vec& x) {
    const double s = (x.squaredNorm() - 16.0) / 16.0;
    return s * s;
  };
  auto estimate = [&](double h, std::uint64_t seed) {
    auto body = [&](long long, RngStream& stream, McAccumulator& acc) {
      acc.add(phi(run_second_order(entry.problem, 0.0, x0, T, h, stream).x_final));
    };
    const auto acc = parallel_reduce<McAccumulator>(seed, 1000000, resolve_workers(0), body);
    return *mc_mean(acc);
  };

  const McStats ref = estimate(0.025, 106);
  const McStats coarse = estimate(0.3, 107);
  const McStats mid = estimate(0.15, 108);
  const double err_coarse = std::abs(coarse.mean - ref.mean);
  const double err_mid = std::abs(mid.mean - ref.mean);
  const double mc_coarse = std::sqrt(coarse.ci_halfwidth * coarse.ci_halfwidth +
                                     ref.ci_halfwidth * ref.ci_halfwidth);
  const double mc_mid =
      std::sqrt(mid.ci_halfwidth * mid.ci_halfwidth + ref.ci_halfwidth * ref.ci_halfwidth);
  const bool resolved = mc_coarse < err_coarse / 3.0 && mc_mid < err_mid / 3.0;
  const double ratio = err_coarse / err_mid;
  const bool ratio_ok = ratio >= 3.0 && ratio <= 5.0;
  std::ostringstream detail;
  detail << "err(h=0.3)=" << fmt(err_coarse, 5) << ", err(h=0.15)=" << fmt(err_mid, 5)
         << ", ratio=" << fmt(ratio, 2) << " (window [3.0, 5.0]); MC errors " << fmt(mc_coarse, 5)
         << "/" << fmt(mc_mid, 5) << (resolved ? " < bias/3" : " NOT < bias/3");
  report(6, "second-order scheme self-convergence", resolved && ratio_ok, detail.str());
}

// 7. Oblique stepper with the normal field reproduces the normal chain bitwise.
void criterion_oblique_reduction() {
  const auto entry = catalog("exp8_3");
  const RsdeProblem& p = entry.problem;
  const VectorField normal_field = [&p](const Vec& z) { return p.domain.inward_normal(z); };
  const double h = 0.05;
  long long reflections = 0;
  bool identical = true;
  for (std::uint64_t traj = 0; traj < 1000 && identical; ++traj) {
    RngStream sa(109, traj), sb(109, traj);
    double t = 0.0;
    Vec x = entry.x0;
    ChainState ob{0.0, entry.x0, 1.0, 0.0};
    for (int k = 0; k < 200; ++k) {
      const StepEvent ea = step_reflected(p, t, x, h, bernoulli_pm1(sa, 3));
      step_oblique(p, normal_field, ob, h, bernoulli_pm1(sb, 3));
      reflections += ea.reflected ? 1 : 0;
      for (int i = 0; i < 3; ++i) identical = identical && x[i] == ob.x[i];
      if (!identical) break;
    }
  }
  std::ostringstream detail;
  detail << "1000 trajectories x 200 steps, " << reflections << " reflections, X paths "
         << (identical ? "bit-identical" : "DIVERGED");
  report(7, "oblique reduction to normal reflection", identical && reflections > 1000,
         detail.str());
}

// 8. Sampling: von Mises boundary mean vs quadrature; Fisher boundary mean.
void criterion_sampling() {
  // Quadrature oracle for the circular boundary mean of cos(theta).
  auto ring_integral = [](auto&& f) {
    const int n = 4096;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += f(2.0 * M_PI * i / n);
    return sum * (2.0 * M_PI / n);
  };
  const double oracle = ring_integral([](double th) {
                          return std::cos(th) * std::exp(std::cos(th));
                        }) /
                        ring_integral([](double th) { return std::exp(std::cos(th)); });

  const Domain disk = Domain::ball(vec2(0, 0), 1.0);
  const VectorField vm_grad = [](const Vec& x) {
    const double n2 = x.squaredNorm();
    return vec2(2.0 * x[0] / n2 + 1.0, 2.0 * x[1] / n2);
  };
  const auto vm_samples =
      sample_boundary(vm_grad, disk, std::numbers::sqrt2, 0.01, 3.0e4, 110, vec2(0.5, 0.0));
  const double vm_mean =
      *weighted_boundary_mean(vm_samples, [](const Vec& z) { return z[0]; });
  const bool vm_ok = std::abs(vm_mean - oracle) <= 0.01;

  const auto fisher = catalog("fisher3d");
  const VectorField fisher_grad = [&fisher](const Vec& x) {
    return fisher.problem.drift(0.0, x);  // sigma^2/2 = 1, so drift = grad log rho
  };
  const auto f_samples = sample_boundary(fisher_grad, fisher.problem.domain,
                                         std::numbers::sqrt2, 0.025, 3.0e4, 111, fisher.x0);
  const double f_mean = *weighted_boundary_mean(
      f_samples, [](const Vec& z) { return z[0] + z[1] + z[2]; });
  const bool f_ok = std::abs(f_mean - 0.53438) <= 0.02;

  std::ostringstream detail;
  detail << "von Mises mean=" << fmt(vm_mean, 5) << " vs quadrature " << fmt(oracle, 5)
         << " (tol 0.01" << (vm_ok ? ")" : ", MISMATCH)") << "; Fisher mean=" << fmt(f_mean, 5)
         << " vs 0.53438 (tol 0.02" << (f_ok ? ")" : ", MISMATCH)");
  report(8, "constrained sampling on the boundary", vm_ok && f_ok, detail.str());
}

// 9. Invariant suites: confinement, reflection symmetry, estimator
// equivariance, merge determinism, worker-count reproducibility.
void criterion_invariants() {
  bool pass = true;
  std::ostringstream detail;

  {  // Domain confinement + predictor layer bound over 1e5 fuzz steps.
    const auto entry = catalog("exp8_2");
    const double sup_b = 1.5 + 1e-9, sup_sigma = std::numbers::sqrt2 + 1e-9, h = 0.05;
    RngStream stream(112, 0);
    double t = 0.0;
    Vec x = entry.x0;
    bool confined = true, bounded = true;
    for (int k = 0; k < 100000; ++k) {
      const StepEvent ev = step_reflected(entry.problem, t, x, h, bernoulli_pm1(stream, 2));
      confined = confined && entry.problem.domain.signed_distance(x) >= -1e-10;
      if (ev.reflected)
        bounded = bounded && ev.contact.r <= h * sup_b + std::sqrt(h * 2.0) * sup_sigma;
    }
    const auto torus = catalog("exp8_4");
    RngStream ts(113, 0);
    double tt = 0.0;
    Vec tx = torus.x0;
    for (int k = 0; k < 30000; ++k) {
      step_reflected(torus.problem, tt, tx, 0.05, bernoulli_pm1(ts, 3));
      confined = confined && torus.problem.domain.signed_distance(tx) >= -1e-10;
    }
    pass = pass && confined && bounded;
    detail << "confinement " << (confined ? "ok" : "VIOLATED") << ", layer bound "
           << (bounded ? "ok" : "VIOLATED");
  }

  {  // Reflection symmetry on random exterior points.
    const Domain torus = Domain::torus3d(4.0, 2.0);
    RngStream stream(114, 0);
    bool symmetric = true;
    for (int i = 0; i < 10000; ++i) {
      Vec z(3);
      const double u = 2.0 * M_PI * stream.next_unit(), v = 2.0 * M_PI * stream.next_unit();
      const double q = 4.0 + 2.0 * std::cos(v);
      z << q * std::cos(u), q * std::sin(u), 2.0 * std::sin(v);
      const Vec nu = torus.inward_normal(z);
      const Vec x = z - (0.25 * stream.next_unit() + 1e-6) * nu;
      const BoundaryContact c = torus.project_to_boundary(x, 0.5);
      const Vec mirrored = x + 2.0 * c.r * c.direction;
      symmetric = symmetric && torus.signed_distance(mirrored) >= -1e-10 &&
                  std::abs((mirrored - c.x_pi).norm() - c.r) <= 1e-10;
    }
    pass = pass && symmetric;
    detail << ", reflection symmetry " << (symmetric ? "ok" : "VIOLATED");
  }

  {  // Estimator equivariance: psi scale (exact for power-of-two factors) and
     // phi shift; ratio consistency.
    auto base_entry = catalog("exp8_3");
    const auto base = time_average(base_entry.problem, 100.0, 0.05, 4, base_entry.x0, 115);
    auto scaled_entry = catalog("exp8_3");
    scaled_entry.problem.robin_data = [](double, const Vec& z) {
      return 2.0 * (z[0] + z[1] + z[2]);
    };
    const auto scaled = time_average(scaled_entry.problem, 100.0, 0.05, 4, base_entry.x0, 115);
    auto shifted_entry = catalog("exp8_3");
    shifted_entry.problem.terminal = [](const Vec& x) { return x.squaredNorm() + 2.5; };
    const auto shifted = time_average(shifted_entry.problem, 100.0, 0.05, 4, base_entry.x0, 115);
    const bool equivariant =
        scaled.averages.psi_hat == 2.0 * base.averages.psi_hat &&
        *scaled.averages.psi_prime_hat == 2.0 * *base.averages.psi_prime_hat &&
        std::abs(shifted.averages.phi_hat - base.averages.phi_hat - 2.5) <= 1e-12 &&
        std::abs(*base.averages.psi_prime_hat -
                 base.averages.psi_hat / base.averages.kappa_hat) <=
            1e-14 * std::abs(*base.averages.psi_prime_hat);
    pass = pass && equivariant;
    detail << ", equivariance " << (equivariant ? "ok" : "VIOLATED");
  }

  {  // Accumulator merge determinism and worker-count reproducibility.
    auto body = [](long long i, RngStream& stream, McAccumulator& acc) {
      acc.add(stream.next_unit() + 1e-6 * static_cast<double>(i % 13));
    };
    const auto direct = parallel_reduce<McAccumulator>(116, 10000, 4, body);
    // Reproduce the fixed chunk structure by hand: per-chunk accumulators
    // filled in index order, merged in chunk order.
    McAccumulator manual;
    for (long long begin = 0; begin < 10000; begin += kTrajectoryChunk) {
      McAccumulator chunk;
      const long long end = std::min<long long>(10000, begin + kTrajectoryChunk);
      for (long long i = begin; i < end; ++i) {
        RngStream stream(116, static_cast<std::uint64_t>(i));
        body(i, stream, chunk);
      }
      manual.merge(chunk);
    }
    const bool merge_ok = direct.sum == manual.sum && direct.sum_sq == manual.sum_sq &&
                          direct.count == manual.count;

    const auto entry = catalog("exp8_1");
    const McResult w1 = solve_parabolic(entry.problem, 0.0, entry.x0, 1.0, 0.1, 20000, 117, 1);
    const McResult w4 = solve_parabolic(entry.problem, 0.0, entry.x0, 1.0, 0.1, 20000, 117, 4);
    const McResult w16 =
        solve_parabolic(entry.problem, 0.0, entry.x0, 1.0, 0.1, 20000, 117, 16);
    const bool workers_ok = w1.estimate == w4.estimate && w1.estimate == w16.estimate &&
                            w1.mc_error == w4.mc_error && w1.mc_error == w16.mc_error;
    pass = pass && merge_ok && workers_ok;
    detail << ", merge determinism " << (merge_ok ? "ok" : "VIOLATED")
           << ", worker-count reproducibility " << (workers_ok ? "ok" : "VIOLATED");
  }

  report(9, "invariant suites", pass, detail.str());
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  std::printf("acceptance suite (fixed seeds; worker count from REFLECTWALK_WORKERS)\n");
  criterion_parabolic();
  criterion_ergodic_interior();
  criterion_ergodic_boundary();
  criterion_elliptic();
  criterion_poisson();
  criterion_second_order();
  criterion_oblique_reduction();
  criterion_sampling();
  criterion_invariants();
  std::printf("%d of 9 criteria passed\n", 9 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
