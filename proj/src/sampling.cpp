#include "reflectwalk/sampling.hpp"

#include <cmath>

namespace reflectwalk {

namespace {

Vec resolve_start(const Domain& domain, const std::optional<Vec>& x0, const char* who) {
  if (x0) {
    if (domain.signed_distance(*x0) < -1e-10)
      throw usage_error(std::string(who) + ": start point is outside the domain");
    return *x0;
  }
  if (auto p = domain.interior_point()) return *p;
  throw usage_error(std::string(who) + ": implicit domains need an explicit start point");
}

void check_finite_drift(const Vec& b) {
  if (!b.allFinite())
    throw model_error("log-density gradient is not finite along the chain");
}

}  // namespace

std::vector<Vec> sample_interior(const VectorField& log_density_gradient, const Domain& domain,
                                 double sigma, double h, long long n, long long burn_in,
                                 std::uint64_t seed, const std::optional<Vec>& x0) {
  if (!(h > 0.0) || n < 0) throw usage_error("sample_interior: need h > 0 and n >= 0");
  if (burn_in < 0) burn_in = static_cast<long long>(std::ceil(10.0 / h));
  const RsdeProblem problem = gradient_system(log_density_gradient, sigma, domain);
  const int d = problem.dim;
  Vec x = resolve_start(domain, x0, "sample_interior");
  double t = 0.0;
  RngStream stream(seed, 0);

  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(n));
  for (long long k = 0; k < burn_in + n; ++k) {
    check_finite_drift(problem.drift(t, x));
    const Vec xi = bernoulli_pm1(stream, d);
    step_reflected(problem, t, x, h, xi);
    if (k >= burn_in) out.push_back(x);
  }
  return out;
}

std::vector<WeightedBoundarySample> sample_boundary(const VectorField& log_density_gradient,
                                                    const Domain& domain, double sigma, double h,
                                                    double T, std::uint64_t seed,
                                                    const std::optional<Vec>& x0) {
  if (!(h > 0.0) || !(T > 0.0)) throw usage_error("sample_boundary: need h > 0 and T > 0");
  const RsdeProblem problem = gradient_system(log_density_gradient, sigma, domain);
  const int d = problem.dim;
  const long long n = static_cast<long long>(std::ceil(T / h - 1e-9));
  Vec x = resolve_start(domain, x0, "sample_boundary");
  double t = 0.0;
  RngStream stream(seed, 0);

  std::vector<WeightedBoundarySample> out;
  for (long long k = 0; k < n; ++k) {
    check_finite_drift(problem.drift(t, x));
    const Vec xi = bernoulli_pm1(stream, d);
    const StepEvent ev = step_reflected(problem, t, x, h, xi);
    if (ev.reflected) {
      const double a = alpha(problem, ev.contact);
      out.push_back({ev.contact.x_pi, ev.contact.r / a});
    }
  }
  return out;
}

std::optional<double> weighted_boundary_mean(const std::vector<WeightedBoundarySample>& samples,
                                             const ScalarField& psi) {
  double num = 0.0, den = 0.0;
  for (const auto& s : samples) {
    num += s.weight * psi(s.z);
    den += s.weight;
  }
  if (!(den > 0.0)) return std::nullopt;
  return num / den;
}

}  // namespace reflectwalk
