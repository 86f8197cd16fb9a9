#include "reflectwalk/stepper.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace reflectwalk {

Vec euler_predict(const RsdeProblem& problem, const ChainState& state, double h, const Vec& xi) {
  const Vec b = problem.drift(state.t, state.x);
  const Mat s = problem.diffusion(state.t, state.x);
  return state.x + h * b + std::sqrt(h) * (s * xi);
}

double predictor_reach(double h, int dim, const Vec& drift, const Mat& diffusion) {
  return 2.0 * (h * drift.norm() + std::sqrt(h * dim) * diffusion.norm());
}

std::pair<Vec, StepEvent> reflect(const Domain& domain, const Vec& x_predict, double reach) {
  StepEvent ev;
  ev.x_predict = x_predict;
  if (domain.signed_distance(x_predict) >= 0.0) {
    ev.reflected = false;
    return {x_predict, ev};
  }
  ev.reflected = true;
  ev.contact = domain.project_to_boundary(x_predict, reach);
  Vec x_next = mirror_across(ev.contact, x_predict);
  // A predictor much deeper than the step scale (possible under a locally
  // huge drift) can mirror past the far side of the domain. Fold the image
  // back until it lands inside; in the normal regime the first mirror is
  // already interior and this loop never runs.
  for (int folds = 0; domain.signed_distance(x_next) < -1e-10; ++folds) {
    if (folds >= 8)
      throw numeric_error(
          "reflected point cannot be folded back into the domain; the step is too large "
          "for the drift or the boundary curvature");
    const BoundaryContact again = domain.project_to_boundary(x_next, reach);
    x_next = mirror_across(again, x_next);
  }
  return {x_next, ev};
}

namespace {

// Shared X-transition; returns the event and the post-step position.
inline std::pair<Vec, StepEvent> advance_position(const RsdeProblem& problem, double t,
                                                  const Vec& x, double h, const Vec& xi) {
  const Vec b = problem.drift(t, x);
  const Mat s = problem.diffusion(t, x);
  const Vec x_predict = x + h * b + std::sqrt(h) * (s * xi);
  const double reach = predictor_reach(h, static_cast<int>(x.size()), b, s);
  auto [x_next, ev] = reflect(problem.domain, x_predict, reach);
  ev.h_used = h;
  return {std::move(x_next), std::move(ev)};
}

}  // namespace

StepEvent step_chain(const RsdeProblem& problem, ChainState& state, double h, const Vec& xi) {
  const double c_k = problem.decay(state.t, state.x);
  const double g_k = problem.source(state.t, state.x);
  auto [x_next, ev] = advance_position(problem, state.t, state.x, h, xi);
  const double t_next = state.t + h;
  const double y_k = state.y;
  if (!ev.reflected) {
    state.z += h * g_k * y_k;
    state.y += h * c_k * y_k;
  } else {
    const double r = ev.contact.r;
    const double gam = problem.robin_coeff(t_next, ev.contact.x_pi);
    const double psi = problem.robin_data(t_next, ev.contact.x_pi);
    state.z += h * g_k * y_k - 2.0 * r * psi * y_k - 2.0 * r * r * psi * gam * y_k;
    state.y += h * c_k * y_k + 2.0 * r * gam * y_k + 2.0 * r * r * gam * gam * y_k;
  }
  state.x = x_next;
  state.t = t_next;
  return ev;
}

StepEvent step_poisson(const RsdeProblem& problem, ChainState& state, double h, const Vec& xi) {
  const double f1 = problem.poisson_volume(state.x);
  auto [x_next, ev] = advance_position(problem, state.t, state.x, h, xi);
  state.z -= h * f1;
  if (ev.reflected) state.z -= 2.0 * ev.contact.r * problem.poisson_boundary(ev.contact.x_pi);
  state.x = x_next;
  state.t += h;
  return ev;
}

StepEvent step_reflected(const RsdeProblem& problem, double& t, Vec& x, double h, const Vec& xi) {
  auto [x_next, ev] = advance_position(problem, t, x, h, xi);
  x = x_next;
  t += h;
  return ev;
}

StepEvent step_oblique(const RsdeProblem& problem, const VectorField& eta, ChainState& state,
                       double h, const Vec& xi, double tol, int max_iter) {
  const Vec b = problem.drift(state.t, state.x);
  const Mat s = problem.diffusion(state.t, state.x);
  const Vec x_predict = state.x + h * b + std::sqrt(h) * (s * xi);
  StepEvent ev;
  ev.x_predict = x_predict;
  ev.h_used = h;
  if (problem.domain.signed_distance(x_predict) >= 0.0) {
    ev.reflected = false;
    state.x = x_predict;
  } else {
    ev.reflected = true;
    ev.contact = problem.domain.oblique_project(eta, x_predict, tol, max_iter);
    Vec x_next = mirror_across(ev.contact, x_predict);
    for (int folds = 0; problem.domain.signed_distance(x_next) < -1e-10; ++folds) {
      if (folds >= 8) throw numeric_error("obliquely reflected point left the domain");
      const BoundaryContact again = problem.domain.oblique_project(eta, x_next, tol, max_iter);
      x_next = mirror_across(again, x_next);
    }
    state.x = x_next;
  }
  state.t += h;
  return ev;
}

namespace {

constexpr int pow3(int n) { return n == 0 ? 1 : 3 * pow3(n - 1); }

// Odometer over the full support {0, +sqrt(3), -sqrt(3)}^d. Calls visit(xi)
// for each of the 3^d realizations; stops early when visit returns false.
template <class Visit>
bool for_each_three_point(int d, Visit&& visit) {
  static const double root3 = std::sqrt(3.0);
  const double levels[3] = {0.0, root3, -root3};
  Vec xi = Vec::Zero(d);
  int digit[kMaxDim] = {0};
  for (;;) {
    if (!visit(xi)) return false;
    int i = 0;
    while (i < d) {
      if (++digit[i] < 3) {
        xi[i] = levels[digit[i]];
        break;
      }
      digit[i] = 0;
      xi[i] = levels[0];
      ++i;
    }
    if (i == d) return true;
  }
}

}  // namespace

SecondOrderRun run_second_order(const RsdeProblem& problem, double t0, Vec x, double T, double h,
                                RngStream& stream) {
  if (!problem.drift_jacobian)
    throw usage_error("run_second_order needs the problem's drift_jacobian");
  if (!(h > 0.0) || !(T > t0)) throw usage_error("run_second_order: need h > 0 and T > t0");
  if (problem.domain.signed_distance(x) < -1e-10)
    throw usage_error("run_second_order: start point is outside the domain");

  const int d = static_cast<int>(x.size());
  const Domain& domain = problem.domain;
  double tau = t0;
  long long steps = 0;

  // Noise vectors S xi and (J S) xi for every point of the three-point
  // support; refilled once per step and reused across all theta probes.
  std::vector<Vec> noise_s(static_cast<std::size_t>(pow3(d)));
  std::vector<Vec> noise_js(noise_s.size());

  while (true) {
    const double hk = (tau <= T - h) ? h : (T - tau);

    // One evaluation of the coefficients per step; the order-2 increment is
    //   delta(theta, xi) = theta b + sqrt(theta) S xi
    //                      + (theta^{3/2}/2) (J S) xi + (theta^2/2) c2
    // with c2 = J b + drift_curvature. Constant diffusion is assumed.
    const Vec b = problem.drift(tau, x);
    const Mat s = problem.diffusion(tau, x);
    const Mat j = problem.drift_jacobian(tau, x);
    const Mat js = j * s;
    Vec c2 = j * b;
    if (problem.drift_curvature) c2 += problem.drift_curvature(tau, x);

    auto delta = [&](double theta, const Vec& xi) {
      const double rt = std::sqrt(theta);
      return Vec((theta * b + rt * (s * xi) + (0.5 * theta * rt) * (js * xi) +
                  (0.5 * theta * theta) * c2)
                     .eval());
    };
    auto realization = [&](double theta, int i) {
      const double rt = std::sqrt(theta);
      return Vec((x + theta * b + rt * noise_s[i] + (0.5 * theta * rt) * noise_js[i] +
                  (0.5 * theta * theta) * c2)
                     .eval());
    };

    // Layer test: x is outside the layer iff every noise realization of the
    // full step stays inside the domain. A conservative stride bound short-
    // circuits the enumeration away from the boundary.
    const double root3d = std::sqrt(3.0 * d);
    auto stride_bound = [&](double theta) {
      const double rt = std::sqrt(theta);
      return theta * b.norm() + rt * root3d * s.norm() + 0.5 * theta * rt * root3d * js.norm() +
             0.5 * theta * theta * c2.norm();
    };
    const double sd_here = domain.signed_distance(x);
    bool in_layer;
    int support = 0;
    if (sd_here > stride_bound(hk)) {
      in_layer = false;
    } else {
      support = 0;
      for_each_three_point(d, [&](const Vec& xi) {
        noise_s[support] = s * xi;
        noise_js[support] = js * xi;
        ++support;
        return true;
      });
      in_layer = false;
      for (int i = 0; i < support; ++i) {
        if (domain.signed_distance(realization(hk, i)) < 0.0) {
          in_layer = true;
          break;
        }
      }
    }

    if (!in_layer) {
      const Vec xi = three_point(stream, d);
      x += delta(hk, xi);
      tau += hk;
    } else {
      // Allowed exit excess: an O(h) layer wide enough to admit the smallest
      // step, whose realizations stride at most stride_bound(h^2).
      const double theta_min = std::min(h * h, hk);
      const double excess = std::max(h * s.norm(), stride_bound(theta_min)) * (1.0 + 1e-12);
      auto admissible = [&](double theta) {
        for (int i = 0; i < support; ++i) {
          if (domain.signed_distance(realization(theta, i)) < -excess) return false;
        }
        return true;
      };
      double theta;
      if (admissible(hk)) {
        theta = hk;
      } else {
        if (!admissible(theta_min))
          throw numeric_error(
              "second-order step: no admissible theta at the minimum step; signed distance " +
              std::to_string(sd_here) + ", h = " + std::to_string(h));
        double lo = theta_min, hi = hk;
        for (int it = 0; it < 30; ++it) {
          const double mid = 0.5 * (lo + hi);
          (admissible(mid) ? lo : hi) = mid;
        }
        theta = lo;
      }

      const Vec xi = three_point(stream, d);
      Vec x_predict = x + delta(theta, xi);
      tau += theta;
      if (domain.signed_distance(x_predict) >= 0.0) {
        x = x_predict;
      } else {
        const BoundaryContact contact =
            domain.project_to_boundary(x_predict, excess * (1.0 + 1e-12) + 1e-300);
        x = mirror_across(contact, x_predict);
        if (domain.signed_distance(x) < -1e-10)
          throw numeric_error("second-order reflection left the domain");
      }
    }

    ++steps;
    if (tau >= T - h * h) break;
  }

  return {std::move(x), steps, tau - t0};
}

}  // namespace reflectwalk
