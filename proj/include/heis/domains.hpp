#pragma once

// Model-domain catalog on H^1 (level-set descriptions) and boundary
// diagnostics: gauge distance to the boundary, characteristic points,
// corkscrew points, and the outer tangent-ball check.

#include "heis/core.hpp"
#include "heis/hyperplanes.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace heis {

// A bounded (or box-clipped) domain Omega = {phi > 0} in H^1. The level set
// phi is continuous with boundary {phi = 0}; lo/hi is a default search box
// containing the region of interest.
struct DomainSpec {
  std::string id;
  std::vector<double> params;
  ScalarField phi;
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};

  bool contains(const Point& g) const { return phi(g) > 0.0; }
  double box_diameter() const;
};

// Catalog:
//   gauge-ball    params {R} or {cx, cy, ct, R}
//   gauge-ring    params {r1, r2} or {cx, cy, ct, r1, r2}
//   slab          params {w} (normal (1,0)) or {wx, wy, w}
//   paraboloid    params {M}:   {t > -M |z|^2}
//   touching-ball no params: the gauge ball of radius 2 centered at (0,0,1),
//                 {|z|^4 + 16 (t-1)^2 < 16}, tangent to {t = 0} at e.
DomainSpec make_domain(const std::string& id,
                       const std::vector<double>& params);

struct BoundaryPoint {
  double distance = 0.0;
  Point foot;
};

// Approximate min of gauge_distance(g, .) over the boundary: ray casting
// over a direction mesh followed by local descent on the ray angles.
// `rays` controls the mesh resolution; `march` the root-bracketing step
// (negative selects a default from the box size).
BoundaryPoint boundary_distance(const Point& g, const DomainSpec& D,
                                int rays = 220, double march = -1.0);

// Euclidean gradient of the level set at g by central differences.
Eigen::Vector3d domain_gradient(const DomainSpec& D, const Point& g,
                                double step = 1e-6);

// Boundary mesh points where the horizontal gradient of the level set nearly
// vanishes relative to the full gradient: |grad_H phi| <= tol |grad phi|.
// `mesh` is the number of cells per axis of the scan grid.
std::vector<Point> characteristic_points(const DomainSpec& D, int mesh,
                                         double tol);

// Center of a gauge ball of the given radius tangent at g0 to the hyperplane
// tangent to {phi = 0} at g0, on the interior (inward = true) or exterior
// side. grad is the Euclidean level-set gradient at g0 (pointing inward).
// Throws std::domain_error when g0 is (numerically) the characteristic point
// of its own tangent plane, where no such family exists.
Point tangent_ball_center_model(const Point& g0, const Eigen::Vector3d& grad,
                                double radius, bool inward);

// Interior corkscrew search: a point A with r/M < d(A, g0) <= r and
// d(A, boundary) > r/M, sought along the metric normal and the Euclidean
// inward normal. Empty optional when no candidate passes at this (r, M).
std::optional<Point> corkscrew_point(const Point& g0, double r,
                                     const DomainSpec& D, double M);

// True iff a center g1 with d(g1, g0) = r and B(g1, r) disjoint from Omega
// is found (model tangent construction plus a search along the outward
// normal), certified by seeded rejection sampling of the ball.
bool outer_ball_check(const Point& g0, double r, const DomainSpec& D,
                      std::int64_t samples, std::uint64_t seed);

// Uniform sample from the gauge ball B(center, R) by box rejection.
Point sample_gauge_ball(std::mt19937_64& gen, const Point& center, double R);

}  // namespace heis
