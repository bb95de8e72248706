#pragma once

// Test-only reference computations, kept independent of the library paths
// they check: mesh minimization for metric projections, rejection-sampling
// containment counts, analytic gradients, and one-sided numeric derivatives.

#include "heis/core.hpp"
#include "heis/domains.hpp"
#include "heis/hyperplanes.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace heis::testing {

struct Min2 {
  double x = 0.0, y = 0.0, value = 0.0;
};

// Zooming grid minimization of f over [x0-rx, x0+rx] x [y0-ry, y0+ry]. The
// window re-centers on the incumbent and shrinks gently, which tracks the
// narrow diagonal valleys these distance objectives produce.
inline Min2 zoom_min2(const std::function<double(double, double)>& f,
                      double x0, double y0, double rx, double ry,
                      int levels = 40, int grid = 24) {
  Min2 best{x0, y0, f(x0, y0)};
  for (int lev = 0; lev < levels; ++lev) {
    const double cx = best.x, cy = best.y;
    for (int i = -grid; i <= grid; ++i)
      for (int j = -grid; j <= grid; ++j) {
        const double x = cx + rx * i / grid;
        const double y = cy + ry * j / grid;
        const double v = f(x, y);
        if (v < best.value) best = {x, y, v};
      }
    rx *= 0.45;
    ry *= 0.45;
  }
  return best;
}

// Distance from g to the vertical hyperplane {<z, omega> = 0} in H^1 by mesh
// minimization over plane coordinates (s, tau): s spans the plane's z-line,
// tau shifts t along the straightened valley so the axis-aligned zoom is
// well conditioned. The objective is still the plain gauge distance.
inline MetricFoot mesh_vertical_projection(const Point& g,
                                           const VerticalHyperplane& P) {
  const Eigen::Vector2d w = P.omega();
  const Eigen::Vector2d nu(-w[1], w[0]);  // spans the plane's z-line
  const double twist = 0.5 * nu.dot(perp(g.z));
  const auto plane_point = [&](double s, double tau) {
    return Point(Eigen::Vector2d(s * nu), g.t - s * twist + tau);
  };
  const auto objective = [&](double s, double tau) {
    return gauge_distance(g, plane_point(s, tau));
  };
  const double L = 4.0 * (1.0 + g.z.norm() + std::sqrt(std::abs(g.t)));
  const Min2 m = zoom_min2(objective, nu.dot(g.z), 0.0, L, L * L);
  MetricFoot out;
  out.foot = plane_point(m.x, m.y);
  out.distance = m.value;
  out.lambda = 0.0;
  return out;
}

// Distance from g to {t = 0} in H^1 by mesh minimization over z, written in
// the (z0, z0^perp) frame where the objective separates cleanly.
inline MetricFoot mesh_characteristic_projection(const Point& g) {
  const Eigen::Vector2d e1 = g.z.norm() > 0 ? Eigen::Vector2d(g.z / g.z.norm())
                                            : Eigen::Vector2d(1, 0);
  const Eigen::Vector2d e2 = Eigen::Vector2d(perp(e1));
  const auto plane_point = [&](double a, double b) {
    return Point(Eigen::Vector2d(g.z + a * e1 + b * e2), 0.0);
  };
  const auto objective = [&](double a, double b) {
    return gauge_distance(g, plane_point(a, b));
  };
  const double L = 4.0 * (1.0 + g.z.norm() + std::sqrt(std::abs(g.t)));
  const Min2 m = zoom_min2(objective, 0.0, 0.0, L, L);
  MetricFoot out;
  out.foot = plane_point(m.x, m.y);
  out.distance = m.value;
  out.lambda = 0.0;
  return out;
}

// Number of sampled ball points violating pred (with a small slack for
// roundoff at the touch point).
inline int containment_violations(const Point& center, double radius,
                                  const std::function<bool(const Point&)>& ok,
                                  int samples, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  int bad = 0;
  for (int s = 0; s < samples; ++s)
    if (!ok(sample_gauge_ball(gen, center, radius))) ++bad;
  return bad;
}

// Analytic horizontal gradient of N^4: 4 |z|^2 z - 16 t z^perp.
inline Eigen::VectorXd grad_gauge_quartic(const Point& g) {
  return 4.0 * g.z.squaredNorm() * g.z - 16.0 * g.t * perp(g.z);
}

// One-sided second-order derivative at 0 of l -> d(g(lambda1), g(l)) along
// the quasi-segment path determined by (znorm, lambda0).
inline double numeric_phi_prime_zero(double znorm, double lambda0,
                                     double lambda1) {
  const double t0 = 0.5 * znorm * znorm * psi_cubic(lambda0);
  const Point g0 = Point::h1(znorm, 0.0, t0);
  const Point g1 = quasi_segment(g0, lambda1);
  const auto phi = [&](double l) {
    return gauge_distance(g1, quasi_segment(g0, l));
  };
  const double h = std::min(1e-5, 1e-3 * lambda1);
  return (-3.0 * phi(0.0) + 4.0 * phi(h) - phi(2.0 * h)) / (2.0 * h);
}

inline std::mt19937_64 seeded(std::uint64_t s) { return std::mt19937_64(s); }

inline Point random_point(std::mt19937_64& gen, int n, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd z(2 * n);
  for (int i = 0; i < 2 * n; ++i) z[i] = u(gen);
  return Point(std::move(z), u(gen));
}

}  // namespace heis::testing
