#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "reflectwalk/models.hpp"
#include "reflectwalk/stepper.hpp"
#include "test_support.hpp"

using namespace reflectwalk;

namespace {

RsdeProblem zeroed_problem(Domain domain) {
  RsdeProblem p;
  p.dim = domain.dimension();
  p.domain = std::move(domain);
  auto zero_ts = [](double, const Vec&) { return 0.0; };
  p.decay = zero_ts;
  p.source = zero_ts;
  p.robin_coeff = zero_ts;
  p.robin_data = zero_ts;
  p.terminal = [](const Vec&) { return 0.0; };
  p.poisson_volume = [](const Vec&) { return 0.0; };
  p.poisson_boundary = [](const Vec&) { return 0.0; };
  p.drift = [](double, const Vec& x) { return Vec(Vec::Zero(x.size())); };
  const int d = p.dim;
  p.diffusion = [d](double, const Vec&) { return Mat(Mat::Zero(d, d)); };
  return p;
}

}  // namespace

TEST_CASE("euler_predict: closed-form cases") {
  RsdeProblem p = zeroed_problem(Domain::ball(vec2(0, 0), 10.0));
  p.diffusion = [](double, const Vec&) { return Mat(Mat::Identity(2, 2)); };
  ChainState st{0.0, vec2(0.0, 0.0), 1.0, 0.0};
  const Vec xp = euler_predict(p, st, 0.04, vec2(1.0, -1.0));
  CHECK(xp[0] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(xp[1] == doctest::Approx(-0.2).epsilon(1e-14));

  // Frozen dynamics: b = 0, sigma = 0.
  RsdeProblem frozen = zeroed_problem(Domain::ball(vec2(0, 0), 10.0));
  const Vec same = euler_predict(frozen, st, 0.04, vec2(1.0, 1.0));
  CHECK(same[0] == 0.0);
  CHECK(same[1] == 0.0);

  // Catalog noise matrix at the origin.
  const auto entry = catalog("exp8_2");
  ChainState origin{0.0, vec2(0.0, 0.0), 1.0, 0.0};
  const Vec xp2 = euler_predict(entry.problem, origin, 0.04, vec2(1.0, 1.0));
  CHECK(xp2[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(xp2[1] == doctest::Approx(0.2 * (std::sqrt(3.0) / 2.0 + 0.5)).epsilon(1e-12));
  CHECK(xp2[1] == doctest::Approx(0.27321).epsilon(1e-4));
}

TEST_CASE("reflect: mirror step and interior pass-through") {
  const Domain disk = Domain::ball(vec2(0, 0), 2.0);
  auto [xn, ev] = reflect(disk, vec2(2.1, 0.0), 0.5);
  CHECK(ev.reflected);
  CHECK(xn[0] == doctest::Approx(1.9).epsilon(1e-14));
  CHECK(ev.contact.r == doctest::Approx(0.1).epsilon(1e-12));

  auto [xi, evi] = reflect(disk, vec2(1.5, 0.5), 0.5);
  CHECK(!evi.reflected);
  CHECK(xi[0] == 1.5);
  CHECK(xi[1] == 0.5);

  const Domain sphere = Domain::ball(vec3(0, 0, 0), 1.0);
  auto [xs, evs] = reflect(sphere, vec3(0, 0, 1.06), 0.5);
  CHECK(evs.reflected);
  CHECK(xs[2] == doctest::Approx(0.94).epsilon(1e-12));
  CHECK(evs.contact.x_pi[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("step_chain: interior discount update") {
  RsdeProblem p = zeroed_problem(Domain::ball(vec2(0, 0), 2.0));
  p.decay = [](double, const Vec&) { return -2.0; };
  ChainState st{0.0, vec2(0.3, 0.1), 1.0, 0.5};
  const StepEvent ev = step_chain(p, st, 0.1, vec2(1.0, -1.0));
  CHECK(!ev.reflected);
  CHECK(st.y == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(st.z == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(st.t == doctest::Approx(0.1));
}

TEST_CASE("step_chain: reflected update with the parabolic boundary data") {
  // exp8_1's Robin data with a deterministic drift that forces r = 0.1.
  auto entry = catalog("exp8_1");
  RsdeProblem p = entry.problem;
  p.drift = [](double, const Vec&) { return vec2(2.0, 0.0); };
  p.diffusion = [](double, const Vec&) { return Mat(Mat::Zero(2, 2)); };
  const double h = 0.1;
  ChainState st{0.2, vec2(3.9, 0.0), 0.7, 1.5};
  const double g_k = p.source(0.2, vec2(3.9, 0.0));
  const StepEvent ev = step_chain(p, st, h, vec2(1.0, 1.0));
  REQUIRE(ev.reflected);
  CHECK(ev.contact.r == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(ev.contact.x_pi[0] == doctest::Approx(4.0).epsilon(1e-12));
  // gamma = 0, so Y is unchanged and the quadratic term vanishes.
  CHECK(st.y == doctest::Approx(0.7).epsilon(1e-14));
  const double psi = p.robin_data(0.3, vec2(4.0, 0.0));
  CHECK(psi == doctest::Approx(8.0 * (1.0 + std::exp(-0.7))).epsilon(1e-12));
  CHECK(st.z == doctest::Approx(1.5 + h * g_k * 0.7 - 2.0 * 0.1 * psi * 0.7).epsilon(1e-12));
  CHECK(st.x[0] == doctest::Approx(3.9).epsilon(1e-12));  // mirrored back inside
}

TEST_CASE("step_poisson: volume and boundary contributions cancel in the crafted case") {
  auto entry = catalog("exp8_5");
  RsdeProblem p = entry.problem;
  p.drift = [](double, const Vec&) { return vec2(10.25, 0.0); };
  p.diffusion = [](double, const Vec&) { return Mat(Mat::Zero(2, 2)); };
  ChainState st{0.0, vec2(0.0, 0.0), 1.0, 3.25};
  CHECK(p.poisson_volume(vec2(0.0, 0.0)) == doctest::Approx(2.0));
  const StepEvent ev = step_poisson(p, st, 0.2, vec2(1.0, 1.0));
  REQUIRE(ev.reflected);
  CHECK(ev.contact.r == doctest::Approx(0.05).epsilon(1e-12));
  // -h phi1 = -0.4 and -2 r phi2 = +0.4
  CHECK(st.z == doctest::Approx(3.25).epsilon(1e-12));
  CHECK(st.y == 1.0);
}

TEST_CASE("step_oblique: normal field gives a bit-identical X path") {
  const auto entry = catalog("exp8_3");
  const RsdeProblem& p = entry.problem;
  const VectorField normal_field = [&p](const Vec& z) { return p.domain.inward_normal(z); };
  const double h = 0.05;
  long long reflections = 0;
  for (std::uint64_t traj = 0; traj < 50; ++traj) {
    RngStream sa(2718, traj), sb(2718, traj);
    double t = 0.0;
    Vec x = entry.x0;
    ChainState ob{0.0, entry.x0, 1.0, 0.0};
    for (int k = 0; k < 400; ++k) {
      const Vec xa = bernoulli_pm1(sa, 3);
      const Vec xb = bernoulli_pm1(sb, 3);
      const StepEvent ea = step_reflected(p, t, x, h, xa);
      const StepEvent eb = step_oblique(p, normal_field, ob, h, xb);
      reflections += ea.reflected ? 1 : 0;
      REQUIRE(ea.reflected == eb.reflected);
      for (int i = 0; i < 3; ++i) REQUIRE(x[i] == ob.x[i]);
    }
  }
  CHECK(reflections > 100);  // the comparison actually exercised reflections
}

TEST_CASE("step_oblique: constant-angle field satisfies the contact residual") {
  RsdeProblem p = zeroed_problem(Domain::ball(vec2(0, 0), 2.0));
  p.drift = [](double, const Vec&) { return vec2(3.0, 0.0); };  // pushes outward
  const double cos30 = std::sqrt(3.0) / 2.0, sin30 = 0.5;
  const VectorField eta = [&p, cos30, sin30](const Vec& z) {
    const Vec nu = p.domain.inward_normal(z);
    const Vec tau = vec2(-nu[1], nu[0]);
    return Vec((cos30 * nu + sin30 * tau).eval());
  };
  ChainState st{0.0, vec2(1.95, 0.0), 1.0, 0.0};
  const StepEvent ev = step_oblique(p, eta, st, 0.1, vec2(1.0, 1.0));
  REQUIRE(ev.reflected);
  const Vec residual = ev.contact.x_pi - ev.x_predict - ev.contact.r * ev.contact.direction;
  CHECK(residual.norm() <= 1e-10);
  CHECK((st.x - (ev.x_predict + 2.0 * ev.contact.r * ev.contact.direction)).norm() <= 1e-14);
  CHECK(std::abs((st.x - ev.contact.x_pi).norm() - ev.contact.r) <= 1e-10);
  // Y, Z pass through untouched.
  CHECK(st.y == 1.0);
  CHECK(st.z == 0.0);
}

TEST_CASE("fuzz: domain confinement, reflection involution, predictor bound") {
  const double sup_b = 1.5 + 1e-9;           // |drift| <= (3/4)|x| <= 1.5 on the disk
  const double sup_sigma = std::numbers::sqrt2 + 1e-9;  // Frobenius norm of the noise
  const auto entry = catalog("exp8_2");
  const RsdeProblem& p = entry.problem;
  const double h = 0.05;
  RngStream stream(31337, 0);
  double t = 0.0;
  Vec x = entry.x0;
  long long reflections = 0;
  for (int k = 0; k < 100000; ++k) {
    const Vec xi = bernoulli_pm1(stream, 2);
    const StepEvent ev = step_reflected(p, t, x, h, xi);
    REQUIRE(p.domain.signed_distance(x) >= -1e-10);
    if (ev.reflected) {
      ++reflections;
      REQUIRE(ev.contact.r <= h * sup_b + std::sqrt(h * 2.0) * sup_sigma);
      // Mapping the reflected point back through the same contact recovers
      // the predictor.
      const Vec back = x - 2.0 * ev.contact.r * ev.contact.direction;
      REQUIRE((back - ev.x_predict).norm() <= 1e-10);
    }
  }
  CHECK(reflections > 50);
}

TEST_CASE("fuzz: torus dynamics stay confined") {
  const auto entry = catalog("exp8_4");
  RngStream stream(99, 0);
  double t = 0.0;
  Vec x = entry.x0;
  for (int k = 0; k < 50000; ++k) {
    const Vec xi = bernoulli_pm1(stream, 3);
    step_reflected(entry.problem, t, x, 0.05, xi);
    REQUIRE(entry.problem.domain.signed_distance(x) >= -1e-10);
  }
}

TEST_CASE("determinism: identical seeds give identical trajectories") {
  const auto entry = catalog("exp8_2");
  auto run = [&entry]() {
    RngStream stream(4242, 17);
    ChainState st{0.0, entry.x0, 1.0, 0.0};
    for (int k = 0; k < 2000; ++k) step_chain(entry.problem, st, 0.1, bernoulli_pm1(stream, 2));
    return st;
  };
  const ChainState a = run();
  const ChainState b = run();
  CHECK(a.x[0] == b.x[0]);
  CHECK(a.x[1] == b.x[1]);
  CHECK(a.y == b.y);
  CHECK(a.z == b.z);
}

TEST_CASE("Y stays in (0,1] for the decaying elliptic problem") {
  const auto entry = catalog("exp8_4");
  RngStream stream(5, 0);
  ChainState st{0.0, entry.x0, 1.0, 0.0};
  for (int k = 0; k < 10000; ++k) {
    step_chain(entry.problem, st, 0.1, bernoulli_pm1(stream, 3));
    REQUIRE(st.y > 0.0);
    REQUIRE(st.y <= 1.0);
  }
}

TEST_CASE("run_second_order: deterministic limit and time accounting") {
  RsdeProblem p = zeroed_problem(Domain::ball(vec2(0, 0), 50.0));
  p.drift = [](double, const Vec&) { return vec2(0.75, -0.5); };
  p.drift_jacobian = [](double, const Vec&) { return Mat(Mat::Zero(2, 2)); };
  RngStream stream(1, 0);
  const double T = 2.0, h = 0.01;
  const SecondOrderRun run = run_second_order(p, 0.0, vec2(1.0, 1.0), T, h, stream);
  CHECK((run.x_final - vec2(1.0 + 0.75 * T, 1.0 - 0.5 * T)).norm() <= 1e-12);
  CHECK(run.elapsed >= T - h * h - 1e-12);
  CHECK(run.elapsed <= T + 1e-12);
}

TEST_CASE("run_second_order: reflected dynamics stay confined and cover the horizon") {
  const auto entry = catalog("exp8_1");
  const RsdeProblem& p = entry.problem;
  const double T = 1.0, h = 0.2;
  for (std::uint64_t traj = 0; traj < 200; ++traj) {
    RngStream stream(8088, traj);
    // Start near the boundary so the layer logic is exercised.
    const SecondOrderRun run = run_second_order(p, 0.0, vec2(3.7, 0.0), T, h, stream);
    REQUIRE(p.domain.signed_distance(run.x_final) >= -1e-10);
    REQUIRE(run.elapsed >= T - h * h - 1e-12);
    REQUIRE(run.elapsed <= T + 1e-12);
  }
}

TEST_CASE("run_second_order: requires the drift jacobian") {
  RsdeProblem p = zeroed_problem(Domain::ball(vec2(0, 0), 1.0));
  RngStream stream(1, 0);
  CHECK_THROWS_AS(run_second_order(p, 0.0, vec2(0, 0), 1.0, 0.1, stream), usage_error);
}
