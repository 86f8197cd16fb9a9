#pragma once

// One-step transition kernels: the weak Euler predictor with symmetrized
// normal reflection, the (X, Y, Z) chain for Robin problems, the Poisson
// variant, the oblique-reflection variant, and the adaptive second-order
// scheme.

#include <cstdint>
#include <utility>

#include "reflectwalk/models.hpp"
#include "reflectwalk/rng.hpp"

namespace reflectwalk {

// One trajectory's state. X stays in the closed domain after every completed
// step; Y is the discounting weight (init 1), Z the accumulated functional
// (init 0).
struct ChainState {
  double t = 0.0;
  Vec x;
  double y = 1.0;
  double z = 0.0;
};

// Record of one transition, consumed by the boundary estimators.
struct StepEvent {
  bool reflected = false;
  BoundaryContact contact;  // valid when reflected
  Vec x_predict;            // the auxiliary predictor X'
  double h_used = 0.0;
};

// X' = X + h b(t,X) + sqrt(h) sigma(t,X) xi, each xi component +-1.
Vec euler_predict(const RsdeProblem& problem, const ChainState& state, double h, const Vec& xi);

// Twice the predictor displacement bound h|b| + sqrt(h d) |sigma|_F; within
// this depth the nearest-boundary projection is treated as unique.
double predictor_reach(double h, int dim, const Vec& drift, const Mat& diffusion);

// Mirror image of x across the contact point along the contact direction.
inline Vec mirror_across(const BoundaryContact& contact, const Vec& x) {
  return x + (2.0 * contact.r) * contact.direction;
}

// Interior points pass through; exterior predictors are reflected
// symmetrically across their nearest boundary point.
std::pair<Vec, StepEvent> reflect(const Domain& domain, const Vec& x_predict, double reach);

// One transition of the (X, Y, Z) chain. Volume coefficients are evaluated at
// (t_k, X_k); boundary coefficients at (t_{k+1}, x_pi).
StepEvent step_chain(const RsdeProblem& problem, ChainState& state, double h, const Vec& xi);

// Poisson variant: Y stays 1 and Z absorbs -h poisson_volume(X_k), plus
// -2 r poisson_boundary(x_pi) on reflection.
StepEvent step_poisson(const RsdeProblem& problem, ChainState& state, double h, const Vec& xi);

// X-only transition (no Y/Z bookkeeping); shared by the ergodic and sampling
// drivers.
StepEvent step_reflected(const RsdeProblem& problem, double& t, Vec& x, double h, const Vec& xi);

// Oblique variant: reflection solves the implicit contact along eta and the
// mirror step follows eta(x_pi). Only X is updated; Y and Z pass through.
StepEvent step_oblique(const RsdeProblem& problem, const VectorField& eta, ChainState& state,
                       double h, const Vec& xi, double tol = 1e-13, int max_iter = 200);

struct SecondOrderRun {
  Vec x_final;
  long long steps = 0;
  double elapsed = 0.0;  // simulated time actually covered
};

// Weak second-order scheme with a random step near the boundary. Requires
// constant diffusion and the problem's drift_jacobian (drift_curvature
// defaults to zero). Away from the boundary layer it takes the order-2 step
// with three-point noise; inside the layer it picks the largest theta in
// [h^2, h] keeping every noise realization within the domain plus an O(h)
// layer, and reflects symmetrically if the realized point exits.
SecondOrderRun run_second_order(const RsdeProblem& problem, double t0, Vec x, double T, double h,
                                RngStream& stream);

}  // namespace reflectwalk
