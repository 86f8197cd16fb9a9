#include "reflectwalk/geometry.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace reflectwalk {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

Domain Domain::ball(const Vec& center, double radius) {
  if (!(radius > 0.0)) throw usage_error("ball radius must be positive");
  if (center.size() < 1 || center.size() > kMaxDim)
    throw usage_error("ball center dimension out of range");
  Domain d;
  d.kind_ = Kind::ball;
  d.dim_ = static_cast<int>(center.size());
  d.center_ = center;
  d.radius_ = radius;
  return d;
}

Domain Domain::torus3d(double major_radius, double minor_radius) {
  if (!(minor_radius > 0.0 && minor_radius < major_radius))
    throw usage_error("torus3d needs 0 < minor radius < major radius");
  Domain d;
  d.kind_ = Kind::torus3d;
  d.dim_ = 3;
  d.major_ = major_radius;
  d.minor_ = minor_radius;
  return d;
}

Domain Domain::implicit(int dim, ScalarField value, VectorField gradient,
                        double projection_tol, int max_projection_iter) {
  if (dim < 1 || dim > kMaxDim) throw usage_error("implicit domain dimension out of range");
  if (!value || !gradient) throw usage_error("implicit domain needs level value and gradient");
  if (!(projection_tol > 0.0) || max_projection_iter < 1)
    throw usage_error("implicit domain: bad projection tolerance or iteration limit");
  Domain d;
  d.kind_ = Kind::implicit_surface;
  d.dim_ = dim;
  d.value_ = std::move(value);
  d.gradient_ = std::move(gradient);
  d.proj_tol_ = projection_tol;
  d.proj_iter_ = max_projection_iter;
  return d;
}

void Domain::check_dim(const Vec& x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw usage_error("point dimension " + std::to_string(x.size()) +
                      " does not match domain dimension " + std::to_string(dim_));
}

double Domain::signed_distance(const Vec& x) const {
  check_dim(x);
  switch (kind_) {
    case Kind::ball:
      return radius_ - (x - center_).norm();
    case Kind::torus3d: {
      const double q = std::sqrt(x[0] * x[0] + x[1] * x[1]);
      const double dq = q - major_;
      return minor_ - std::sqrt(dq * dq + x[2] * x[2]);
    }
    case Kind::implicit_surface:
      return value_(x);
  }
  return 0.0;  // unreachable
}

Vec Domain::inward_normal(const Vec& z) const {
  check_dim(z);
  switch (kind_) {
    case Kind::ball: {
      Vec v = center_ - z;
      const double n = v.norm();
      if (n == 0.0) throw numeric_error("inward normal undefined at the ball center");
      return v / n;
    }
    case Kind::torus3d: {
      const double q = std::sqrt(z[0] * z[0] + z[1] * z[1]);
      if (q < 1e-14) throw numeric_error("inward normal undefined on the torus axis");
      Vec ring = vec3(major_ * z[0] / q, major_ * z[1] / q, 0.0);
      Vec w = ring - z;
      const double m = w.norm();
      if (m == 0.0) throw numeric_error("inward normal undefined on the torus core circle");
      return w / m;
    }
    case Kind::implicit_surface: {
      Vec g = gradient_(z);
      const double n = g.norm();
      if (!(n > 0.0)) throw numeric_error("level-set gradient vanishes at boundary point");
      return g / n;  // value grows inward, so the gradient points inward
    }
  }
  return Vec();  // unreachable
}

BoundaryContact Domain::project_to_boundary(const Vec& x, double reach) const {
  check_dim(x);
  const double sd = signed_distance(x);
  if (sd >= 0.0)
    throw usage_error("project_to_boundary needs an exterior point (signed distance " +
                      fmt(sd) + ")");
  if (-sd > reach)
    throw projection_error("exterior point is deeper (" + fmt(-sd) +
                           ") than the uniqueness guard reach (" + fmt(reach) +
                           "); the step size is too large for the domain curvature");

  BoundaryContact c;
  switch (kind_) {
    case Kind::ball: {
      Vec v = x - center_;
      const double n = v.norm();  // n > radius: exterior
      c.x_pi = center_ + v * (radius_ / n);
      c.r = n - radius_;
      c.nu = -v / n;
      break;
    }
    case Kind::torus3d: {
      const double q = std::sqrt(x[0] * x[0] + x[1] * x[1]);
      if (q < 1e-14)
        throw projection_error("torus projection undefined near the symmetry axis");
      Vec ring = vec3(major_ * x[0] / q, major_ * x[1] / q, 0.0);
      Vec w = x - ring;
      const double m = w.norm();  // m > minor: exterior
      c.x_pi = ring + w * (minor_ / m);
      c.r = m - minor_;
      c.nu = -w / m;
      break;
    }
    case Kind::implicit_surface:
      c = project_implicit(x);
      break;
  }
  c.direction = c.nu;
  return c;
}

// Alternates Newton pulls onto the level set with tangential moves toward the
// queried point; at the fixed point (x - y) is parallel to the level-set
// gradient, which is the nearest-point condition.
BoundaryContact Domain::project_implicit(const Vec& x) const {
  Vec y = x;
  auto pull_to_surface = [&](Vec& p) {
    for (int j = 0; j < 12; ++j) {
      const double f = value_(p);
      if (std::abs(f) <= proj_tol_) return;
      Vec g = gradient_(p);
      const double g2 = g.squaredNorm();
      if (!(g2 > 0.0))
        throw projection_error("level-set gradient vanished during projection");
      p -= (f / g2) * g;
    }
  };

  bool converged = false;
  for (int it = 0; it < proj_iter_; ++it) {
    pull_to_surface(y);
    Vec g = gradient_(y);
    const double gn = g.norm();
    if (!(gn > 0.0)) throw projection_error("level-set gradient vanished during projection");
    Vec n = g / gn;
    Vec d = x - y;
    Vec tangential = d - d.dot(n) * n;
    y += tangential;
    if (tangential.norm() <= proj_tol_) {
      converged = true;
      break;
    }
  }
  pull_to_surface(y);
  if (!converged || std::abs(value_(y)) > 1e-10)
    throw projection_error("implicit projection did not converge; residual level value " +
                           fmt(value_(y)));

  BoundaryContact c;
  c.x_pi = y;
  c.r = (x - y).norm();
  Vec g = gradient_(y);
  c.nu = g / g.norm();
  return c;
}

double Domain::ray_to_boundary(const Vec& origin, const Vec& dir, double hint) const {
  double lo = 0.0;  // signed_distance(origin) < 0
  double hi = hint > 0.0 ? hint : 1.0;
  int expansions = 0;
  while (signed_distance(origin + hi * dir) < 0.0) {
    lo = hi;
    hi *= 1.7;
    if (++expansions > 80)
      throw numeric_error("ray from exterior point never reached the boundary");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (signed_distance(origin + mid * dir) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

BoundaryContact Domain::oblique_project(const VectorField& eta, const Vec& x, double tol,
                                        int max_iter) const {
  check_dim(x);
  const double sd = signed_distance(x);
  if (sd >= 0.0)
    throw usage_error("oblique_project needs an exterior point (signed distance " + fmt(sd) +
                      ")");
  if (!(tol > 0.0) || max_iter < 1)
    throw usage_error("oblique_project: bad tolerance or iteration limit");

  BoundaryContact normal = project_to_boundary(x, std::numeric_limits<double>::infinity());
  Vec e = eta(normal.x_pi);
  if (static_cast<int>(e.size()) != dim_)
    throw usage_error("oblique field dimension mismatch");
  // The iteration starts from the normal contact. When that contact already
  // solves the implicit equation to tolerance (eta coincides with the normal
  // field), the first update is empty and the normal contact is the answer.
  if ((normal.x_pi - x - normal.r * e).norm() <= tol) return normal;

  Vec p = normal.x_pi;
  double s = normal.r;
  double damping = 1.0;
  double prev_delta = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    e = eta(p);
    Vec nu_p = inward_normal(p);
    if (!(e.dot(nu_p) > 0.0))
      throw model_error("oblique direction is not inward at the contact iterate (eta.nu = " +
                        fmt(e.dot(nu_p)) + ")");
    const double s_new = ray_to_boundary(x, e, s);
    Vec p_new = x + s_new * e;
    const double delta = (p_new - p).norm();
    if (delta <= tol) {
      BoundaryContact c;
      c.x_pi = p_new;
      c.r = s_new;
      c.nu = inward_normal(p_new);
      c.direction = eta(p_new);
      return c;
    }
    if (delta > prev_delta && it > 2) damping = 0.5;
    p += damping * (p_new - p);
    prev_delta = delta;
    s = s_new;
  }
  throw numeric_error("oblique projection did not converge within " + std::to_string(max_iter) +
                      " iterations; last update " + fmt(prev_delta));
}

std::optional<std::pair<Vec, Vec>> Domain::bounding_box() const {
  switch (kind_) {
    case Kind::ball: {
      Vec lo = center_.array() - radius_;
      Vec hi = center_.array() + radius_;
      return std::make_pair(lo, hi);
    }
    case Kind::torus3d: {
      const double s = major_ + minor_;
      return std::make_pair(vec3(-s, -s, -minor_), vec3(s, s, minor_));
    }
    case Kind::implicit_surface:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Vec> Domain::interior_point() const {
  switch (kind_) {
    case Kind::ball:
      return center_;
    case Kind::torus3d:
      return vec3(major_, 0.0, 0.0);
    case Kind::implicit_surface:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace reflectwalk
