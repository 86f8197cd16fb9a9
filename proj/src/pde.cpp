#include "reflectwalk/pde.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace reflectwalk {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void require_start_inside(const RsdeProblem& problem, const Vec& x0, const char* who) {
  if (static_cast<int>(x0.size()) != problem.dim)
    throw usage_error(std::string(who) + ": start point dimension mismatch");
  if (problem.domain.signed_distance(x0) < -1e-10)
    throw usage_error(std::string(who) + ": start point is outside the domain");
}

McResult run_mc(long long M, std::uint64_t seed, int workers, double h_record,
                const std::function<double(RngStream&)>& trajectory) {
  const auto t_start = std::chrono::steady_clock::now();
  auto body = [&](long long, RngStream& stream, McAccumulator& acc) {
    acc.add(trajectory(stream));
  };
  const McAccumulator acc = parallel_reduce<McAccumulator>(seed, M, resolve_workers(workers), body);
  const McStats stats = *mc_mean(acc);
  McResult res;
  res.estimate = stats.mean;
  res.mc_error = stats.ci_halfwidth;
  res.M = M;
  res.h = h_record;
  res.seed = seed;
  res.wall_time = seconds_since(t_start);
  return res;
}

}  // namespace

Schedule poisson_schedule(double h, double ell, double beta, double upsilon, double T) {
  if (!(h > 0.0) || !(upsilon > 0.0) || !(T > 0.0))
    throw config_error("poisson_schedule: need h, upsilon, T > 0");
  if (!(ell > 0.0 && ell <= 1.0) || !(beta > 0.0 && beta <= 1.0))
    throw config_error("poisson_schedule: need 0 < ell <= 1 and 0 < beta <= 1");
  if (!(ell / 2.0 + beta > 1.0))
    throw config_error("poisson_schedule: need ell/2 + beta > 1 (got " +
                       std::to_string(ell / 2.0 + beta) + ")");

  Schedule s;
  s.h = h;
  s.ell = ell;
  s.beta = beta;
  s.upsilon = upsilon;
  s.T = T;
  double t_j = 0.0;
  for (int j = 1; t_j < T; ++j) {
    const double h_j = h / std::pow(static_cast<double>(j), beta);
    const double j_ell = std::pow(static_cast<double>(j), ell);
    // The tiny offset keeps values like 1/(0.2*1) that land just below an
    // integer from being floored one short.
    const long long n_j = static_cast<long long>(std::floor(upsilon / (h_j * j_ell) + 1e-9));
    if (n_j < 1)
      throw config_error("poisson_schedule: block j=" + std::to_string(j) +
                         " has zero steps; h is too large relative to upsilon");
    t_j += upsilon / j_ell;
    s.blocks.push_back({j, h_j, n_j, t_j});
    if (j > 50'000'000) throw config_error("poisson_schedule: block count blew up");
  }
  s.Lambda = static_cast<int>(s.blocks.size());
  return s;
}

McResult solve_parabolic(const RsdeProblem& problem, double t0, const Vec& x0, double T, double h,
                         long long M, std::uint64_t seed, int workers) {
  if (!(h > 0.0) || !(T > t0) || M < 1)
    throw config_error("solve_parabolic: need h > 0, T > t0, M >= 1");
  require_start_inside(problem, x0, "solve_parabolic");
  const long long n = static_cast<long long>(std::ceil((T - t0) / h - 1e-9));
  const double h_eff = (T - t0) / static_cast<double>(n);  // snapped down
  const int d = problem.dim;

  return run_mc(M, seed, workers, h_eff, [&](RngStream& stream) {
    ChainState st{t0, x0, 1.0, 0.0};
    for (long long k = 0; k < n; ++k) {
      const Vec xi = bernoulli_pm1(stream, d);
      step_chain(problem, st, h_eff, xi);
    }
    return problem.terminal(st.x) * st.y + st.z;
  });
}

McResult solve_elliptic_decay(const RsdeProblem& problem, const Vec& x0, double T, double h,
                              long long M, std::uint64_t seed, int workers) {
  if (!(h > 0.0) || !(T > 0.0) || M < 1)
    throw config_error("solve_elliptic_decay: need h > 0, T > 0, M >= 1");
  if (!problem.autonomous)
    throw usage_error("solve_elliptic_decay: coefficients must be time-independent");
  require_start_inside(problem, x0, "solve_elliptic_decay");

  // Probe the decay sign at the start point and a handful of interior points.
  {
    RngStream probe(0x5eedc0deULL, 0);
    auto check = [&](const Vec& x) {
      if (!(problem.decay(0.0, x) < 0.0))
        throw usage_error(
            "solve_elliptic_decay: decay coefficient is not negative at an interior point; "
            "use the Poisson solver for zero-decay problems");
    };
    check(x0);
    if (auto box = problem.domain.bounding_box()) {
      const auto& [lo, hi] = *box;
      int found = 0;
      for (int attempt = 0; attempt < 1024 && found < 16; ++attempt) {
        Vec x(problem.dim);
        for (int i = 0; i < problem.dim; ++i)
          x[i] = lo[i] + (hi[i] - lo[i]) * probe.next_unit();
        if (problem.domain.signed_distance(x) > 0.0) {
          check(x);
          ++found;
        }
      }
    }
  }

  const long long n = static_cast<long long>(std::ceil(T / h - 1e-9));
  const double h_eff = T / static_cast<double>(n);
  const int d = problem.dim;

  return run_mc(M, seed, workers, h_eff, [&](RngStream& stream) {
    ChainState st{0.0, x0, 1.0, 0.0};
    for (long long k = 0; k < n; ++k) {
      const Vec xi = bernoulli_pm1(stream, d);
      step_chain(problem, st, h_eff, xi);
    }
    return st.z;
  });
}

McResult solve_poisson(const RsdeProblem& problem, const Vec& x0, const Schedule& schedule,
                       long long M, std::uint64_t seed, int workers) {
  if (M < 1) throw config_error("solve_poisson: need M >= 1");
  if (schedule.blocks.empty()) throw config_error("solve_poisson: empty schedule");
  require_start_inside(problem, x0, "solve_poisson");
  const int d = problem.dim;

  return run_mc(M, seed, workers, schedule.h, [&](RngStream& stream) {
    ChainState st{0.0, x0, 1.0, 0.0};
    for (const auto& block : schedule.blocks) {
      for (long long k = 0; k < block.N_j; ++k) {
        const Vec xi = bernoulli_pm1(stream, d);
        step_poisson(problem, st, block.h_j, xi);
      }
    }
    return st.z;
  });
}

McResult poisson_fixed_step_diagnostic(const RsdeProblem& problem, const Vec& x0, double T,
                                       double h, long long M, std::uint64_t seed, int workers) {
  if (!(h > 0.0) || !(T > 0.0) || M < 1)
    throw config_error("poisson_fixed_step_diagnostic: need h > 0, T > 0, M >= 1");
  require_start_inside(problem, x0, "poisson_fixed_step_diagnostic");
  const long long n = static_cast<long long>(std::ceil(T / h - 1e-9));
  const int d = problem.dim;

  return run_mc(M, seed, workers, h, [&](RngStream& stream) {
    ChainState st{0.0, x0, 1.0, 0.0};
    for (long long k = 0; k < n; ++k) {
      const Vec xi = bernoulli_pm1(stream, d);
      step_poisson(problem, st, h, xi);
    }
    return st.z;
  });
}

}  // namespace reflectwalk
