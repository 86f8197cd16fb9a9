#pragma once

// Sampling from densities with compact support and from their boundary
// restrictions, via the reflected gradient system.

#include <cstdint>
#include <optional>
#include <vector>

#include "reflectwalk/ergodic.hpp"
#include "reflectwalk/models.hpp"

namespace reflectwalk {

struct WeightedBoundarySample {
  Vec z;          // point on the boundary
  double weight;  // r / alpha at the reflection event
};

// Reflected gradient-system chain for the target's log-density gradient;
// returns the n states after burn_in steps. burn_in < 0 selects the default
// ceil(10/h). x0 defaults to the domain's interior point; targets singular
// there need an explicit start.
std::vector<Vec> sample_interior(const VectorField& log_density_gradient, const Domain& domain,
                                 double sigma, double h, long long n, long long burn_in,
                                 std::uint64_t seed,
                                 const std::optional<Vec>& x0 = std::nullopt);

// Emits (x_pi, r/alpha) at every reflection over [0, T]; weighted averages of
// psi(z) estimate the boundary-restricted ergodic limit.
std::vector<WeightedBoundarySample> sample_boundary(const VectorField& log_density_gradient,
                                                    const Domain& domain, double sigma, double h,
                                                    double T, std::uint64_t seed,
                                                    const std::optional<Vec>& x0 = std::nullopt);

// Weighted mean of psi over boundary samples, accumulated in emission order.
std::optional<double> weighted_boundary_mean(const std::vector<WeightedBoundarySample>& samples,
                                             const ScalarField& psi);

}  // namespace reflectwalk
