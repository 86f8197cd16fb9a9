#pragma once

// End-to-end Monte Carlo PDE solvers: the Robin parabolic solver, the
// elliptic solver with decay, and the adaptive double-partition solver for
// the Poisson/Neumann problem.

#include <cstdint>
#include <vector>

#include "reflectwalk/ergodic.hpp"
#include "reflectwalk/models.hpp"
#include "reflectwalk/montecarlo.hpp"

namespace reflectwalk {

// Double time partition: block j has step h_j = h / j^beta and
// N_j = floor(upsilon / (h_j j^ell)) steps; the nominal block end is
// T_j = T_{j-1} + upsilon / j^ell, and Lambda is the first index with
// T_Lambda >= T.
struct Schedule {
  struct Block {
    int j;
    double h_j;
    long long N_j;
    double T_j;
  };
  std::vector<Block> blocks;
  int Lambda = 0;
  double h = 0.0, ell = 0.0, beta = 0.0, upsilon = 0.0, T = 0.0;

  long long total_steps() const {
    long long n = 0;
    for (const auto& b : blocks) n += b.N_j;
    return n;
  }
};

// Requires 0 < ell <= 1, 0 < beta <= 1, and ell/2 + beta > 1.
Schedule poisson_schedule(double h, double ell, double beta, double upsilon, double T);

// Mean of terminal(X_N) Y_N + Z_N over M trajectories of the (X,Y,Z) chain
// from (t0, x0) to T. (T - t0)/h is snapped to an integer step count by
// shrinking h; the effective step is recorded in the result.
McResult solve_parabolic(const RsdeProblem& problem, double t0, const Vec& x0, double T, double h,
                         long long M, std::uint64_t seed, int workers = 0);

// Autonomous Robin problem with strictly negative decay: mean of Z_N after
// T/h steps, error O(h + e^{-lambda T}). Nonnegative decay found at sampled
// interior points is rejected with a pointer to the Poisson solver.
McResult solve_elliptic_decay(const RsdeProblem& problem, const Vec& x0, double T, double h,
                              long long M, std::uint64_t seed, int workers = 0);

// Mean of Z_N over M trajectories driven through the schedule; approximates
// u(x0) - u_bar where u_bar is the invariant-density average of the solution.
// The result's h field records the schedule's base step.
McResult solve_poisson(const RsdeProblem& problem, const Vec& x0, const Schedule& schedule,
                       long long M, std::uint64_t seed, int workers = 0);

// Diagnostic only: drives the Poisson data with a constant step to time T.
// The estimate drifts linearly in T at fixed h, which is the divergence the
// schedule exists to remove. Not a solver.
McResult poisson_fixed_step_diagnostic(const RsdeProblem& problem, const Vec& x0, double T,
                                       double h, long long M, std::uint64_t seed,
                                       int workers = 0);

}  // namespace reflectwalk
