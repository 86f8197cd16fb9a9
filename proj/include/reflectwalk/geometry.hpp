#pragma once

// Implicit-surface representation of the bounded domain with exact
// projections, inward normals, and oblique projections.
//
// Sign convention: signed distance is positive strictly inside, zero on the
// boundary, negative outside.

#include <functional>
#include <optional>
#include <utility>

#include "reflectwalk/errors.hpp"
#include "reflectwalk/linalg.hpp"

namespace reflectwalk {

using ScalarField = std::function<double(const Vec&)>;
using VectorField = std::function<Vec(const Vec&)>;

// Record of one boundary contact: x_pi = x + r * direction for the queried
// exterior point x; direction equals nu for normal projection and the oblique
// field value at x_pi otherwise.
struct BoundaryContact {
  Vec x_pi;
  double r = 0.0;
  Vec nu;
  Vec direction;
};

class Domain {
 public:
  enum class Kind { ball, torus3d, implicit_surface };

  // Inert zero-dimensional domain; every geometric query on it fails the
  // dimension check. Build real domains through the named constructors.
  Domain() = default;

  static Domain ball(const Vec& center, double radius);
  // Solid torus around the x3 axis: points with
  // (sqrt(x1^2+x2^2) - major)^2 + x3^2 < minor^2.
  static Domain torus3d(double major_radius, double minor_radius);
  // Level-set domain {value > 0} with supplied gradient. `value` need not be
  // the exact distance; projection iterates until the nearest-point
  // conditions hold to `projection_tol`.
  static Domain implicit(int dim, ScalarField value, VectorField gradient,
                         double projection_tol = 1e-12, int max_projection_iter = 50);

  Kind kind() const { return kind_; }
  int dimension() const { return dim_; }

  double signed_distance(const Vec& x) const;

  // Unit inward normal at (or near) a boundary point.
  Vec inward_normal(const Vec& z) const;

  // Nearest boundary point for an exterior x. `reach` guards the region where
  // the nearest point is unique; callers pass their step-size bound and a
  // deeper point is an error.
  BoundaryContact project_to_boundary(const Vec& x, double reach) const;

  // Solves x_pi = x + r * eta(x_pi), x_pi on the boundary, for an inward unit
  // field eta with eta . nu > 0. Damped fixed-point iteration initialized at
  // the normal projection; converged when the contact update is <= tol.
  BoundaryContact oblique_project(const VectorField& eta, const Vec& x, double tol,
                                  int max_iter) const;

  // Axis-aligned box containing the closure; absent for implicit domains.
  std::optional<std::pair<Vec, Vec>> bounding_box() const;
  // A point well inside the domain; absent for implicit domains.
  std::optional<Vec> interior_point() const;

 private:
  void check_dim(const Vec& x) const;
  BoundaryContact project_implicit(const Vec& x) const;
  // Smallest s > 0 with signed_distance(origin + s * dir) = 0, origin outside.
  double ray_to_boundary(const Vec& origin, const Vec& dir, double hint) const;

  Kind kind_ = Kind::ball;
  int dim_ = 0;
  Vec center_;
  double radius_ = 0.0;
  double major_ = 0.0;
  double minor_ = 0.0;
  ScalarField value_;
  VectorField gradient_;
  double proj_tol_ = 1e-12;
  int proj_iter_ = 50;
};

}  // namespace reflectwalk
