#include "reflectwalk/models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace reflectwalk {

namespace {

TimeScalarField zero_ts() {
  return [](double, const Vec&) { return 0.0; };
}

ScalarField zero_s() {
  return [](const Vec&) { return 0.0; };
}

Mat diag2(double a, double b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Mat diag3(double a, double b, double c) {
  Mat m = Mat::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

RsdeProblem blank_problem(Domain domain) {
  RsdeProblem p;
  p.dim = domain.dimension();
  p.domain = std::move(domain);
  p.decay = zero_ts();
  p.source = zero_ts();
  p.robin_coeff = zero_ts();
  p.robin_data = zero_ts();
  p.terminal = zero_s();
  p.poisson_volume = zero_s();
  p.poisson_boundary = zero_s();
  return p;
}

// Disk of radius 4; parabolic Neumann problem with rotation drift and
// anisotropic constant noise. Horizon fixed at T = 1; the reference value at
// the origin is 25 (1 + e^{-1}).
ProblemCatalogEntry make_exp8_1() {
  const double T = 1.0;
  const double R = 4.0;
  ProblemCatalogEntry e;
  e.name = "exp8_1";
  e.problem_kind = ProblemKind::parabolic;
  e.problem = blank_problem(Domain::ball(vec2(0.0, 0.0), R));
  e.problem.autonomous = false;
  e.problem.drift = [](double, const Vec& x) { return vec2(-x[1], x[0]); };
  e.problem.diffusion = [](double, const Vec&) { return diag2(1.0, 2.0); };
  e.problem.source = [T](double t, const Vec& x) {
    const double decay_t = std::exp(-(T - t));
    return 5.0 * (1.0 + decay_t) - (25.0 - x.squaredNorm()) * decay_t;
  };
  e.problem.robin_data = [T, R](double t, const Vec&) {
    return 2.0 * R * (1.0 + std::exp(-(T - t)));
  };
  e.problem.terminal = [](const Vec& x) { return 2.0 * (25.0 - x.squaredNorm()); };
  e.problem.drift_jacobian = [](double, const Vec&) {
    Mat j = Mat::Zero(2, 2);
    j(0, 1) = -1.0;
    j(1, 0) = 1.0;
    return j;
  };
  e.problem.drift_curvature = [](double, const Vec&) { return Vec(Vec::Zero(2)); };
  e.x0 = vec2(0.0, 0.0);
  e.t0 = 0.0;
  e.T = T;
  e.horizon_fixed = true;
  e.exact.solution = 25.0 * (1.0 + std::exp(-1.0));  // 34.1970 (4 d.p.)
  return e;
}

Mat rotation_noise(double u) {
  const double third_pi = std::numbers::pi / 3.0;
  Mat s(2, 2);
  s(0, 0) = std::sin(u);
  s(0, 1) = std::cos(u);
  s(1, 0) = std::sin(u + third_pi);
  s(1, 1) = std::cos(u + third_pi);
  return s;
}

// Linear-drift diffusion on the disk of radius 2 whose invariant density is
// the standard Gaussian restricted to the disk. The covariance is the
// constant matrix [[1, 1/2], [1/2, 1]] even though sigma varies with x.
RsdeProblem gaussian_disk_dynamics(double R) {
  RsdeProblem p = blank_problem(Domain::ball(vec2(0.0, 0.0), R));
  p.drift = [](double, const Vec& x) {
    return vec2(-(x[0] / 2.0 + x[1] / 4.0), -(x[0] / 4.0 + x[1] / 2.0));
  };
  p.diffusion = [](double, const Vec& x) { return rotation_noise(x[0] + x[1]); };
  return p;
}

// phi_bar = (2 - 6 e^{-2}) / (1 - e^{-2}) is the second moment of the
// standard Gaussian restricted to the disk of radius 2.
double gaussian_disk_second_moment() {
  const double e2 = std::exp(-2.0);
  return (2.0 - 6.0 * e2) / (1.0 - e2);  // 1.3739 (4 d.p.)
}

ProblemCatalogEntry make_exp8_2() {
  ProblemCatalogEntry e;
  e.name = "exp8_2";
  e.problem_kind = ProblemKind::ergodic_interior;
  e.problem = gaussian_disk_dynamics(2.0);
  e.problem.terminal = [](const Vec& x) { return x.squaredNorm(); };
  e.x0 = vec2(0.0, 0.0);
  e.T = 1.0e5;
  e.exact.phi_bar = gaussian_disk_second_moment();
  return e;
}

// Unit ball; gradient system whose invariant density is proportional to
// exp((V.x)/|x|), so the boundary restriction is the Fisher distribution with
// mean direction V and concentration 1. kappa = 3 and the boundary mean of
// z1+z2+z3 is (coth 1 - 1)(1 + 1/sqrt(2)).
ProblemCatalogEntry make_fisher(const std::string& name) {
  const double vx = 0.5, vy = 0.5, vz = std::numbers::sqrt2 / 2.0;
  ProblemCatalogEntry e;
  e.name = name;
  e.problem_kind = ProblemKind::ergodic_boundary;
  e.problem = blank_problem(Domain::ball(vec3(0.0, 0.0, 0.0), 1.0));
  e.problem.drift = [vx, vy, vz](double, const Vec& x) {
    const double n2 = x.squaredNorm();
    const double n = std::sqrt(n2);
    const Vec v = vec3(vx, vy, vz);
    const double proj = v.dot(x) / n2;
    return Vec(((v - proj * x) / n).eval());
  };
  e.problem.diffusion = [](double, const Vec&) {
    return diag3(std::numbers::sqrt2, std::numbers::sqrt2, std::numbers::sqrt2);
  };
  e.problem.robin_data = [](double, const Vec& z) { return z[0] + z[1] + z[2]; };
  e.problem.terminal = [](const Vec& x) { return x.squaredNorm(); };
  e.x0 = vec3(-0.5, -0.5, -0.5);
  e.T = 3.0e5;
  e.has_boundary_observable = true;
  e.exact.kappa = 3.0;
  e.exact.psi_prime_bar = (1.0 / std::tanh(1.0) - 1.0) * (1.0 + std::numbers::sqrt2 / 2.0);
  return e;
}

// Torus with major radius 4 and minor radius 2; elliptic Robin problem with
// decay c = -2. The solution is x1 + x2^2 + x3^3.
ProblemCatalogEntry make_exp8_4() {
  const double R = 4.0, r = 2.0;
  ProblemCatalogEntry e;
  e.name = "exp8_4";
  e.problem_kind = ProblemKind::elliptic;
  e.problem = blank_problem(Domain::torus3d(R, r));
  e.problem.drift = [](double, const Vec& x) { return vec3(-x[2], x[0], x[1]); };
  e.problem.diffusion = [](double, const Vec&) {
    return diag3(1.0, std::sqrt(5.0), std::numbers::sqrt2);
  };
  e.problem.decay = [](double, const Vec&) { return -2.0; };
  e.problem.source = [](double, const Vec& x) {
    const double x1 = x[0], x2 = x[1], x3 = x[2];
    return 2.0 * x3 * x3 * x3 - 3.0 * x2 * x3 * x3 + 2.0 * x2 * x2 - 2.0 * x1 * x2 +
           2.0 * x1 - 5.0 * x3 - 5.0;
  };
  e.problem.robin_data = [R, r](double, const Vec& z) {
    const double q = std::sqrt(z[0] * z[0] + z[1] * z[1]);
    return ((R / q - 1.0) * (z[0] + 2.0 * z[1] * z[1]) - 3.0 * z[2] * z[2] * z[2]) / r;
  };
  e.x0 = vec3(1.0, 2.0, 0.5);
  e.T = 4.0;
  e.exact.solution = 5.125;  // 1 + 2^2 + (1/2)^3
  return e;
}

// Disk of radius 2, same dynamics as exp8_2; Poisson problem with Neumann
// data. The solution is |x|^2 up to the additive offset u_bar.
ProblemCatalogEntry make_exp8_5() {
  ProblemCatalogEntry e;
  e.name = "exp8_5";
  e.problem_kind = ProblemKind::poisson;
  e.problem = gaussian_disk_dynamics(2.0);
  e.problem.poisson_volume = [](const Vec& x) {
    return 2.0 - x[0] * x[0] - x[1] * x[1] - x[0] * x[1];
  };
  e.problem.poisson_boundary = [](const Vec&) { return -4.0; };
  e.problem.terminal = [](const Vec& x) { return x.squaredNorm(); };
  e.x0 = vec2(std::numbers::sqrt2, std::numbers::sqrt2);
  e.T = 5.0;
  e.exact.u_bar = gaussian_disk_second_moment();
  e.exact.solution = 4.0 - gaussian_disk_second_moment();  // 2.626 (3 d.p.)
  return e;
}

// Unit disk; gradient system for the density proportional to |x|^2 e^{beta x1},
// whose boundary restriction is the von Mises distribution with concentration
// beta. The boundary mean of z1 is I1(beta)/I0(beta).
ProblemCatalogEntry make_von_mises(double beta) {
  ProblemCatalogEntry e;
  e.name = "von_mises";
  e.problem_kind = ProblemKind::ergodic_boundary;
  Domain disk = Domain::ball(vec2(0.0, 0.0), 1.0);
  VectorField grad_log_rho = [beta](const Vec& x) {
    const double n2 = x.squaredNorm();
    return vec2(2.0 * x[0] / n2 + beta, 2.0 * x[1] / n2);
  };
  e.problem = gradient_system(grad_log_rho, std::numbers::sqrt2, disk);
  e.problem.robin_data = [](double, const Vec& z) { return z[0]; };
  e.problem.terminal = [](const Vec& x) { return x.squaredNorm(); };
  e.x0 = vec2(0.5, 0.0);
  e.T = 1.0e4;
  e.has_boundary_observable = true;
  e.exact.psi_prime_bar = std::cyl_bessel_i(1.0, beta) / std::cyl_bessel_i(0.0, beta);
  return e;
}

}  // namespace

ProblemCatalogEntry catalog(const std::string& name) {
  if (name == "exp8_1") return make_exp8_1();
  if (name == "exp8_2") return make_exp8_2();
  if (name == "exp8_3") return make_fisher("exp8_3");
  if (name == "exp8_4") return make_exp8_4();
  if (name == "exp8_5") return make_exp8_5();
  if (name == "fisher3d") {
    ProblemCatalogEntry e = make_fisher("fisher3d");
    e.T = 3.0e4;
    return e;
  }
  if (name == "von_mises") return make_von_mises(1.0);
  if (name.rfind("von_mises:", 0) == 0) {
    const std::string arg = name.substr(10);
    double beta = 0.0;
    try {
      std::size_t pos = 0;
      beta = std::stod(arg, &pos);
      if (pos != arg.size()) throw std::invalid_argument(arg);
    } catch (const std::exception&) {
      throw usage_error("von_mises parameter must be a number, got '" + arg + "'");
    }
    if (!(beta >= 0.0)) throw usage_error("von_mises concentration must be >= 0");
    ProblemCatalogEntry e = make_von_mises(beta);
    e.name = name;
    return e;
  }
  throw usage_error("unknown problem '" + name +
                    "'; catalog: exp8_1, exp8_2, exp8_3, exp8_4, exp8_5, "
                    "von_mises[:beta], fisher3d");
}

double alpha(const RsdeProblem& problem, const Vec& z) {
  BoundaryContact c;
  c.x_pi = z;
  c.nu = problem.domain.inward_normal(z);
  return alpha(problem, c);
}

double alpha(const RsdeProblem& problem, const BoundaryContact& contact) {
  const Mat a = problem.covariance(0.0, contact.x_pi);
  const double w = contact.nu.dot(a * contact.nu) / 2.0;
  if (!(w > 0.0))
    throw model_error("co-normal weight is not positive (nu.a nu = " + std::to_string(2.0 * w) +
                      "); ellipticity violated");
  return w;
}

RsdeProblem gradient_system(const VectorField& log_density_gradient, double sigma,
                            const Domain& domain) {
  if (!(sigma >= 0.0)) throw usage_error("gradient_system: sigma must be nonnegative");
  RsdeProblem p = blank_problem(domain);
  const double scale = sigma * sigma / 2.0;
  p.drift = [scale, log_density_gradient](double, const Vec& x) {
    return Vec((scale * log_density_gradient(x)).eval());
  };
  const int d = domain.dimension();
  p.diffusion = [sigma, d](double, const Vec&) {
    return Mat((sigma * Mat::Identity(d, d)).eval());
  };
  return p;
}

}  // namespace reflectwalk
