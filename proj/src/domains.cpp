#include "heis/domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace heis {

namespace {

Point h1_point(double x, double y, double t) { return Point::h1(x, y, t); }

void require_h1(const Point& g) {
  if (g.n() != 1)
    throw std::invalid_argument("domain diagnostics are implemented on H^1");
}

double sq(double v) { return v * v; }

// Quartic gauge offset d(c, g)^4, smooth in g.
double gauge_quartic(const Point& c, const Point& g) {
  const Eigen::VectorXd dz = g.z - c.z;
  const double tw = g.t - c.t + 0.5 * g.z.dot(perp(c.z));
  return sq(dz.squaredNorm()) + 16.0 * tw * tw;
}

}  // namespace

double DomainSpec::box_diameter() const {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) s += sq(hi[k] - lo[k]);
  return std::sqrt(s);
}

DomainSpec make_domain(const std::string& id,
                       const std::vector<double>& params) {
  DomainSpec D;
  D.id = id;
  D.params = params;
  if (id == "gauge-ball") {
    Point c = Point::identity(1);
    double R = 0.0;
    if (params.size() == 1) {
      R = params[0];
    } else if (params.size() == 4) {
      c = h1_point(params[0], params[1], params[2]);
      R = params[3];
    } else {
      throw std::invalid_argument("gauge-ball expects {R} or {cx,cy,ct,R}");
    }
    if (!(R > 0.0)) throw std::invalid_argument("gauge-ball radius must be > 0");
    const double R4 = R * R * R * R;
    D.phi = [c, R4](const Point& g) { return R4 - gauge_quartic(c, g); };
    const double zr = 1.25 * R + 0.5 * c.z.norm() * R;
    const double tr = 1.25 * (R * R / 4.0 + 0.5 * c.z.norm() * R);
    D.lo = {c.z[0] - zr, c.z[1] - zr, c.t - tr};
    D.hi = {c.z[0] + zr, c.z[1] + zr, c.t + tr};
  } else if (id == "gauge-ring") {
    Point c = Point::identity(1);
    double r1 = 0.0, r2 = 0.0;
    if (params.size() == 2) {
      r1 = params[0];
      r2 = params[1];
    } else if (params.size() == 5) {
      c = h1_point(params[0], params[1], params[2]);
      r1 = params[3];
      r2 = params[4];
    } else {
      throw std::invalid_argument(
          "gauge-ring expects {r1,r2} or {cx,cy,ct,r1,r2}");
    }
    if (!(0.0 < r1 && r1 < r2))
      throw std::invalid_argument("gauge-ring requires 0 < r1 < r2");
    const double a4 = r1 * r1 * r1 * r1;
    const double b4 = r2 * r2 * r2 * r2;
    D.phi = [c, a4, b4](const Point& g) {
      const double q = gauge_quartic(c, g);
      return std::min(q - a4, b4 - q);
    };
    const double zr = 1.25 * r2 + 0.5 * c.z.norm() * r2;
    const double tr = 1.25 * (r2 * r2 / 4.0 + 0.5 * c.z.norm() * r2);
    D.lo = {c.z[0] - zr, c.z[1] - zr, c.t - tr};
    D.hi = {c.z[0] + zr, c.z[1] + zr, c.t + tr};
  } else if (id == "slab") {
    Eigen::VectorXd w(2);
    double width = 0.0;
    if (params.size() == 1) {
      w << 1.0, 0.0;
      width = params[0];
    } else if (params.size() == 3) {
      w << params[0], params[1];
      width = params[2];
    } else {
      throw std::invalid_argument("slab expects {w} or {wx,wy,w}");
    }
    if (!(width > 0.0)) throw std::invalid_argument("slab width must be > 0");
    if (!(w.norm() > 0.0))
      throw std::invalid_argument("slab normal must be nonzero");
    w /= w.norm();
    D.phi = [w, width](const Point& g) {
      const double s = w.dot(g.z);
      return std::min(s, width - s);
    };
    const double m = 1.5 * width;
    D.lo = {-m, -m, -m};
    D.hi = {width + m, m, m};
  } else if (id == "paraboloid") {
    if (params.size() != 1)
      throw std::invalid_argument("paraboloid expects {M}");
    const double M = params[0];
    if (!(M > 0.0)) throw std::invalid_argument("paraboloid requires M > 0");
    D.phi = [M](const Point& g) { return g.t + M * g.z.squaredNorm(); };
    D.lo = {-1.0, -1.0, -2.2 * M};
    D.hi = {1.0, 1.0, 1.0};
  } else if (id == "touching-ball") {
    if (!params.empty())
      throw std::invalid_argument("touching-ball takes no parameters");
    const Point c = h1_point(0.0, 0.0, 1.0);
    D.phi = [c](const Point& g) { return 16.0 - gauge_quartic(c, g); };
    D.lo = {-2.2, -2.2, -0.4};
    D.hi = {2.2, 2.2, 2.4};
  } else {
    throw std::invalid_argument("unknown domain id: " + id);
  }
  return D;
}

namespace {

// First boundary crossing of phi along g + s * dir, s > 0. Returns the root
// parameter, or a negative value when no crossing occurs inside the box.
double ray_root(const DomainSpec& D, const Point& g,
                const Eigen::Vector3d& dir, double march, double s_max) {
  const auto at = [&](double s) {
    return Point(Eigen::Vector2d(g.z[0] + s * dir[0], g.z[1] + s * dir[1]),
                 g.t + s * dir[2]);
  };
  double prev = 0.0;
  double fprev = D.phi(g);
  if (!(fprev > 0.0)) return -1.0;
  for (double s = march; s <= s_max; s += march) {
    const double f = D.phi(at(s));
    if (f <= 0.0) {
      double a = prev, b = s;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (a + b);
        if (D.phi(at(mid)) > 0.0)
          a = mid;
        else
          b = mid;
      }
      return 0.5 * (a + b);
    }
    prev = s;
    fprev = f;
  }
  (void)fprev;
  return -1.0;
}

Eigen::Vector3d unit_dir(double theta, double phi_ang) {
  const double sp = std::sin(phi_ang);
  return {sp * std::cos(theta), sp * std::sin(theta), std::cos(phi_ang)};
}

struct RayObjective {
  const DomainSpec* D;
  const Point* g;
  double march;
  double s_max;

  // Gauge distance to the first boundary hit along the (theta, phi) ray;
  // +inf when the ray leaves the box without crossing.
  double operator()(double theta, double phi_ang, Point* hit = nullptr) const {
    const Eigen::Vector3d dir = unit_dir(theta, phi_ang);
    const double s = ray_root(*D, *g, dir, march, s_max);
    if (s < 0.0) return std::numeric_limits<double>::infinity();
    const Point b(Eigen::Vector2d(g->z[0] + s * dir[0], g->z[1] + s * dir[1]),
                  g->t + s * dir[2]);
    if (hit) *hit = b;
    return gauge_distance(*g, b);
  }
};

}  // namespace

BoundaryPoint boundary_distance(const Point& g, const DomainSpec& D, int rays,
                                double march) {
  require_h1(g);
  if (!D.contains(g))
    throw std::domain_error("boundary_distance requires an interior point");
  const double diam = D.box_diameter();
  if (march <= 0.0) march = diam / 600.0;
  RayObjective obj{&D, &g, march, 1.5 * diam};

  // Direction mesh: golden-angle spiral over the sphere.
  double best = std::numeric_limits<double>::infinity();
  double best_theta = 0.0, best_phi = 0.0;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < rays; ++k) {
    const double c = 1.0 - 2.0 * (k + 0.5) / rays;
    const double phi_ang = std::acos(std::clamp(c, -1.0, 1.0));
    const double theta = golden * k;
    const double v = obj(theta, phi_ang);
    if (v < best) {
      best = v;
      best_theta = theta;
      best_phi = phi_ang;
    }
  }
  if (!std::isfinite(best))
    throw std::runtime_error("no boundary crossing found inside the box");

  // Local descent on the ray angles (Nelder-Mead, 2d).
  struct Vertex {
    double th, ph, val;
  };
  const auto eval = [&](double th, double ph) { return obj(th, ph); };
  const double h0 = 2.0 * M_PI / std::sqrt(static_cast<double>(rays));
  std::array<Vertex, 3> simplex{
      Vertex{best_theta, best_phi, best},
      Vertex{best_theta + h0, best_phi, eval(best_theta + h0, best_phi)},
      Vertex{best_theta, best_phi + h0, eval(best_theta, best_phi + h0)}};
  for (int it = 0; it < 160; ++it) {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.val < b.val; });
    if (std::abs(simplex[2].val - simplex[0].val) <
        1e-13 * (1.0 + std::abs(simplex[0].val)))
      break;
    const double cth = 0.5 * (simplex[0].th + simplex[1].th);
    const double cph = 0.5 * (simplex[0].ph + simplex[1].ph);
    const double rth = cth + (cth - simplex[2].th);
    const double rph = cph + (cph - simplex[2].ph);
    const double rv = eval(rth, rph);
    if (rv < simplex[0].val) {
      const double eth = cth + 2.0 * (cth - simplex[2].th);
      const double eph = cph + 2.0 * (cph - simplex[2].ph);
      const double ev = eval(eth, eph);
      simplex[2] = ev < rv ? Vertex{eth, eph, ev} : Vertex{rth, rph, rv};
    } else if (rv < simplex[1].val) {
      simplex[2] = Vertex{rth, rph, rv};
    } else {
      const double kth = cth + 0.5 * (simplex[2].th - cth);
      const double kph = cph + 0.5 * (simplex[2].ph - cph);
      const double kv = eval(kth, kph);
      if (kv < simplex[2].val) {
        simplex[2] = Vertex{kth, kph, kv};
      } else {
        for (int i = 1; i < 3; ++i) {
          simplex[i].th = simplex[0].th + 0.5 * (simplex[i].th - simplex[0].th);
          simplex[i].ph = simplex[0].ph + 0.5 * (simplex[i].ph - simplex[0].ph);
          simplex[i].val = eval(simplex[i].th, simplex[i].ph);
        }
      }
    }
  }
  std::sort(simplex.begin(), simplex.end(),
            [](const Vertex& a, const Vertex& b) { return a.val < b.val; });
  BoundaryPoint out;
  out.distance = obj(simplex[0].th, simplex[0].ph, &out.foot);
  return out;
}

Eigen::Vector3d domain_gradient(const DomainSpec& D, const Point& g,
                                double step) {
  Eigen::Vector3d grad;
  for (int k = 0; k < 3; ++k) {
    Point fwd = g, bwd = g;
    if (k < 2) {
      fwd.z[k] += step;
      bwd.z[k] -= step;
    } else {
      fwd.t += step;
      bwd.t -= step;
    }
    grad[k] = (D.phi(fwd) - D.phi(bwd)) / (2.0 * step);
  }
  return grad;
}

std::vector<Point> characteristic_points(const DomainSpec& D, int mesh,
                                         double tol) {
  if (mesh < 4) throw std::invalid_argument("mesh resolution too small");
  const std::array<double, 3> step = {(D.hi[0] - D.lo[0]) / mesh,
                                      (D.hi[1] - D.lo[1]) / mesh,
                                      (D.hi[2] - D.lo[2]) / mesh};
  const auto node = [&](int i, int j, int k) {
    return h1_point(D.lo[0] + i * step[0], D.lo[1] + j * step[1],
                    D.lo[2] + k * step[2]);
  };
  std::vector<Point> roots;
  const auto scan_edge = [&](const Point& a, const Point& b) {
    const double fa = D.phi(a), fb = D.phi(b);
    if (!((fa > 0.0) != (fb > 0.0))) return;
    Point lo = a, hi = b;
    for (int it = 0; it < 60; ++it) {
      Point mid(0.5 * (lo.z + hi.z), 0.5 * (lo.t + hi.t));
      if ((D.phi(mid) > 0.0) == (fa > 0.0))
        lo = mid;
      else
        hi = mid;
    }
    roots.push_back(Point(0.5 * (lo.z + hi.z), 0.5 * (lo.t + hi.t)));
  };
  for (int i = 0; i <= mesh; ++i)
    for (int j = 0; j <= mesh; ++j)
      for (int k = 0; k <= mesh; ++k) {
        if (i < mesh) scan_edge(node(i, j, k), node(i + 1, j, k));
        if (j < mesh) scan_edge(node(i, j, k), node(i, j + 1, k));
        if (k < mesh) scan_edge(node(i, j, k), node(i, j, k + 1));
      }
  if (roots.empty())
    throw std::runtime_error("domain boundary does not meet the scan box");

  const double grad_step = *std::min_element(step.begin(), step.end()) / 20.0;
  std::vector<Point> found;
  for (const Point& b : roots) {
    const Eigen::Vector3d grad = domain_gradient(D, b, grad_step);
    const HorizontalVector hg =
        horizontal_gradient(D.phi, b, grad_step);
    if (hg.norm() <= tol * grad.norm()) found.push_back(b);
  }
  // Cluster duplicates from adjacent mesh edges.
  const double merge =
      2.0 * *std::max_element(step.begin(), step.end());
  std::vector<Point> unique;
  for (const Point& p : found) {
    bool dup = false;
    for (Point& q : unique) {
      const Eigen::Vector2d dz = p.z - q.z;
      if (std::sqrt(dz.squaredNorm() + sq(p.t - q.t)) < merge) {
        dup = true;
        break;
      }
    }
    if (!dup) unique.push_back(p);
  }
  return unique;
}

namespace {

// Block swap (x, y, t) -> (y, x, -t): a group automorphism preserving the
// gauge norm, exchanging the half-spaces {t > 0} and {t < 0}.
Point mirror_vertical(const Point& g) {
  const int n = g.n();
  Eigen::VectorXd z(2 * n);
  z.head(n) = g.z.tail(n);
  z.tail(n) = g.z.head(n);
  return Point(std::move(z), -g.t);
}

}  // namespace

Point tangent_ball_center_model(const Point& g0, const Eigen::Vector3d& grad,
                                double radius, bool inward) {
  require_h1(g0);
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  const Eigen::Vector2d ab(grad[0], grad[1]);
  const double c = grad[2];
  if (std::abs(c) <= 1e-9 * ab.norm()) {
    // Vertical tangent plane: translate g0 to the identity, place the center
    // at parameter `radius` along the normal, translate back.
    Eigen::VectorXd w = ab / ab.norm();
    if (!inward) w = -w;
    return multiply(g0, Point(radius * w, 0.0));
  }
  // Plane with a characteristic point: <ab, z> + c t + d0 = 0. Left-translate
  // by the inverse of its characteristic point, which maps it onto {t = 0}.
  const double d0 = -(ab.dot(g0.z) + c * g0.t);
  const Point gc = h1_point(-2.0 * grad[1] / c, 2.0 * grad[0] / c, -d0 / c);
  const Point p = multiply(inverse(gc), g0);  // on {t = 0}
  const double zn = p.z.norm();
  if (zn <= 1e-9 * (1.0 + g0.z.norm()))
    throw std::domain_error(
        "tangent plane is characteristic at the touch point; no ball family");
  const bool interior_above = c > 0.0;  // interior maps to {t > 0} iff c > 0
  const bool above = inward == interior_above;
  const Point pz(p.z, 0.0);
  Point center;
  if (above) {
    center = characteristic_tangent_center(
                 pz, characteristic_lambda_for_radius(zn, radius))
                 .center;
  } else {
    const Point m = mirror_vertical(pz);
    center = mirror_vertical(
        characteristic_tangent_center(
            m, characteristic_lambda_for_radius(zn, radius))
            .center);
  }
  return multiply(gc, center);
}

std::optional<Point> corkscrew_point(const Point& g0, double r,
                                     const DomainSpec& D, double M) {
  require_h1(g0);
  if (!(r > 0.0) || !(M > 1.0))
    throw std::invalid_argument("corkscrew requires r > 0 and M > 1");
  const Eigen::Vector3d grad = domain_gradient(D, g0, 1e-6 * (1.0 + r));
  const double slack = 1.0 + 1e-9;

  std::vector<Point> candidates;
  // Metric-normal candidates from the tangent-plane model.
  for (const double f : {0.5, 0.7, 0.35, 0.9, 0.2}) {
    try {
      candidates.push_back(tangent_ball_center_model(g0, grad, f * r, true));
    } catch (const std::domain_error&) {
      break;  // characteristic touch point; fall through to normal search
    }
  }
  // Euclidean inward-normal candidates.
  const Eigen::Vector3d nu = grad / grad.norm();
  for (const double f : {0.5, 0.25, 0.75, 0.1, 0.05}) {
    const double s = f * r;
    candidates.push_back(h1_point(g0.z[0] + s * nu[0], g0.z[1] + s * nu[1],
                                  g0.t + s * nu[2]));
  }

  std::optional<Point> best;
  double best_margin = 0.0;
  for (const Point& A : candidates) {
    if (!D.contains(A)) continue;
    const double dg = gauge_distance(A, g0);
    if (!(dg * slack > r / M) || !(dg <= r * slack)) continue;
    const double db = boundary_distance(A, D).distance;
    if (!(db * slack > r / M)) continue;
    if (!best || db > best_margin) {
      best = A;
      best_margin = db;
    }
  }
  return best;
}

Point sample_gauge_ball(std::mt19937_64& gen, const Point& center, double R) {
  const int n = center.n();
  std::uniform_real_distribution<double> uz(-R, R);
  std::uniform_real_distribution<double> ut(-R * R / 4.0, R * R / 4.0);
  const double R4 = R * R * R * R;
  Eigen::VectorXd z(2 * n);
  for (;;) {
    for (int k = 0; k < 2 * n; ++k) z[k] = uz(gen);
    const double t = ut(gen);
    const double zn2 = z.squaredNorm();
    if (zn2 * zn2 + 16.0 * t * t < R4)
      return multiply(center, Point(z, t));
  }
}

bool outer_ball_check(const Point& g0, double r, const DomainSpec& D,
                      std::int64_t samples, std::uint64_t seed) {
  require_h1(g0);
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  const Eigen::Vector3d grad = domain_gradient(D, g0, 1e-6 * (1.0 + r));

  std::vector<Point> candidates;
  try {
    candidates.push_back(tangent_ball_center_model(g0, grad, r, false));
  } catch (const std::domain_error&) {
    // No tangent family at this point; only the normal search below remains.
  }
  // Outward Euclidean-normal candidate at gauge distance exactly r.
  {
    const Eigen::Vector3d nu = -grad / grad.norm();
    const auto at = [&](double s) {
      return h1_point(g0.z[0] + s * nu[0], g0.z[1] + s * nu[1],
                      g0.t + s * nu[2]);
    };
    double hi = r;
    while (gauge_distance(at(hi), g0) < r && hi < 64.0 * r) hi *= 2.0;
    if (gauge_distance(at(hi), g0) >= r) {
      double lo = 0.0;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (gauge_distance(at(mid), g0) < r)
          lo = mid;
        else
          hi = mid;
      }
      candidates.push_back(at(0.5 * (lo + hi)));
    }
  }

  for (const Point& g1 : candidates) {
    if (std::abs(gauge_distance(g1, g0) - r) > 1e-6 * r) continue;
    std::mt19937_64 gen(seed);
    bool clean = true;
    for (std::int64_t s = 0; s < samples && clean; ++s) {
      const Point q = sample_gauge_ball(gen, g1, r);
      if (D.phi(q) > 0.0) clean = false;
    }
    if (clean) return true;
  }
  return false;
}

}  // namespace heis
