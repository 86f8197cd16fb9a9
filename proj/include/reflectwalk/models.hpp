#pragma once

// Problem definitions: coefficient bundles for reflected-diffusion / PDE
// instances, the built-in catalog of benchmark problems, and the gradient
// system used for constrained sampling.

#include <functional>
#include <optional>
#include <string>

#include "reflectwalk/geometry.hpp"

namespace reflectwalk {

using TimeScalarField = std::function<double(double, const Vec&)>;
using TimeVectorField = std::function<Vec(double, const Vec&)>;
using TimeMatrixField = std::function<Mat(double, const Vec&)>;

// One reflected-diffusion / PDE instance. Conventions:
//   dX = drift dt + diffusion dW + nu dL          (normal reflection)
//   dY = decay Y dt + robin_coeff Y dL
//   dZ = source Y dt - robin_data Y dL
// terminal(x) doubles as the ergodic observable. poisson_volume and
// poisson_boundary feed the zero-decay Neumann solver, where Z evolves as
//   dZ = -poisson_volume dt - poisson_boundary dL.
struct RsdeProblem {
  Domain domain;
  int dim = 0;
  TimeVectorField drift;              // b(t,x)
  TimeMatrixField diffusion;          // sigma(t,x)
  TimeScalarField decay;              // c(t,x)
  TimeScalarField source;             // g(t,x)
  TimeScalarField robin_coeff;        // gamma(t,z)
  TimeScalarField robin_data;         // psi(t,z); also the boundary observable
  ScalarField terminal;               // phi(x); also the interior observable
  ScalarField poisson_volume;         // phi1(x)
  ScalarField poisson_boundary;       // phi2(z)
  bool autonomous = true;

  // Data for the second-order scheme (constant diffusion only):
  // drift_jacobian[i][j] = d drift_i / d x_j, and drift_curvature =
  // dt drift + (1/2) sum_ij a_ij d2 drift / dx_i dx_j. Both optional.
  TimeMatrixField drift_jacobian;
  TimeVectorField drift_curvature;

  // Covariance a = sigma sigma^T.
  Mat covariance(double t, const Vec& x) const {
    Mat s = diffusion(t, x);
    return s * s.transpose();
  }
};

// Reference values carried by catalog entries; provenance is documented where
// each entry is built.
struct ExactValues {
  std::optional<double> solution;        // PDE solution at the default point
  std::optional<double> phi_bar;         // interior ergodic limit of `terminal`
  std::optional<double> kappa;           // boundary mass of the invariant density
  std::optional<double> psi_prime_bar;   // boundary ergodic limit of `robin_data`
  std::optional<double> u_bar;           // additive offset of the Neumann solution
};

enum class ProblemKind { parabolic, ergodic_interior, ergodic_boundary, elliptic, poisson };

struct ProblemCatalogEntry {
  std::string name;
  RsdeProblem problem;
  ProblemKind problem_kind = ProblemKind::parabolic;
  Vec x0;
  double t0 = 0.0;
  double T = 1.0;  // default horizon
  // Set when the coefficients themselves refer to the horizon; overriding T
  // would change the problem, so the CLI rejects it.
  bool horizon_fixed = false;
  bool has_boundary_observable = false;
  ExactValues exact;
};

// Built-in problems: exp8_1 .. exp8_5, von_mises (optionally "von_mises:<beta>"),
// fisher3d. Unknown names raise usage_error listing the catalog.
ProblemCatalogEntry catalog(const std::string& name);

// Co-normal boundary weight alpha(z) = (nu . a(z) nu) / 2 with a = sigma sigma^T.
double alpha(const RsdeProblem& problem, const Vec& z);
double alpha(const RsdeProblem& problem, const BoundaryContact& contact);

// Autonomous problem with drift (sigma^2/2) * grad log rho and diffusion
// sigma * I; all PDE data zeroed. Long-time simulation samples from the
// density rho restricted to the domain.
RsdeProblem gradient_system(const VectorField& log_density_gradient, double sigma,
                            const Domain& domain);

}  // namespace reflectwalk
