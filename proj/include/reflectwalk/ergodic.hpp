#pragma once

// Time-averaging and ensemble-averaging estimators for ergodic limits inside
// the domain and on its boundary, with block-based statistical error.

#include <cstdint>
#include <optional>
#include <vector>

#include "reflectwalk/montecarlo.hpp"
#include "reflectwalk/stepper.hpp"

namespace reflectwalk {

using ContactWeight = std::function<double(const BoundaryContact&)>;

// Running sums of one trajectory. sum_w and sum_wpsi carry the co-normal
// weight r/alpha of each reflection; sum_r and sum_rpsi carry the raw r.
// Snapshots at block boundaries feed the batch-means statistic.
struct ErgodicAccumulator {
  long long n_steps = 0;
  double sum_phi = 0.0;
  double sum_w = 0.0;
  double sum_wpsi = 0.0;
  double sum_r = 0.0;
  double sum_rpsi = 0.0;
  double h = 0.0;

  struct Snapshot {
    long long n_steps;
    double sum_phi, sum_w, sum_wpsi, sum_r, sum_rpsi;
  };
  std::vector<Snapshot> blocks;

  void snapshot() { blocks.push_back({n_steps, sum_phi, sum_w, sum_wpsi, sum_r, sum_rpsi}); }
};

// The five time averages with their batch-means half-widths (2 sqrt(J_L)).
// Ratio estimators are absent when no boundary mass accumulated; statistical
// errors are absent with fewer than two (valid) blocks.
struct TimeAverages {
  double phi_hat = 0.0;
  double kappa_hat = 0.0;
  double psi_hat = 0.0;
  std::optional<double> psi_prime_hat;  // psi_hat / kappa_hat
  std::optional<double> psi_tilde_hat;  // raw-r weighted boundary average
  std::optional<double> phi_stat_err;
  std::optional<double> kappa_stat_err;
  std::optional<double> psi_stat_err;
  std::optional<double> psi_prime_stat_err;
  std::optional<double> psi_tilde_stat_err;
};

// Folds one transition into the sums. x_k is the pre-step state (the
// interior average runs over X_0 .. X_{N-1}).
void accumulate(ErgodicAccumulator& acc, const StepEvent& event, const Vec& x_k,
                const ScalarField& phi, const ScalarField& psi, const ContactWeight& alpha_at);

TimeAverages finalize(const ErgodicAccumulator& acc);

struct TimeAverageRun {
  TimeAverages averages;
  long long steps = 0;
  double h = 0.0;
  long long blocks = 0;
  double wall_time = 0.0;
};

// Single long trajectory split into `blocks` equal blocks. phi defaults to
// the problem's terminal observable, psi to its boundary data.
TimeAverageRun time_average(const RsdeProblem& problem, double T, double h, long long blocks,
                            const Vec& x0, std::uint64_t seed);

struct EnsembleBoundary {
  std::optional<double> ratio_of_means;    // E[sum r psi/alpha] / E[sum r/alpha]
  std::optional<McStats> mean_of_ratios;   // E[sum r psi/alpha / sum r/alpha]
  long long trajectories_with_mass = 0;
  long long M = 0;
  double wall_time = 0.0;
};

// M independent trajectories from x0 to time T; both discretized
// ensemble-averaging estimators of the boundary ergodic limit.
EnsembleBoundary ensemble_boundary(const RsdeProblem& problem, const Vec& x0, double T, double h,
                                   long long M, std::uint64_t seed, int workers = 0);

// Monte Carlo mean of phi(X_N) over M trajectories; approximates the interior
// ergodic limit with error O(h + e^{-lambda T}).
McResult ensemble_phi(const RsdeProblem& problem, const Vec& x0, double T, double h, long long M,
                      std::uint64_t seed, int workers = 0);

}  // namespace reflectwalk
