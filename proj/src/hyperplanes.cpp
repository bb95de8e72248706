#include "heis/hyperplanes.hpp"

#include <cmath>

namespace heis {

namespace {

constexpr double kOnPlaneTol = 1e-10;

double quartic_root(double v) { return std::sqrt(std::sqrt(v)); }

}  // namespace

VerticalHyperplane::VerticalHyperplane(Eigen::VectorXd omega)
    : omega_(std::move(omega)) {
  if (omega_.size() < 2 || omega_.size() % 2 != 0)
    throw std::invalid_argument("normal must have even length 2n");
  const double norm = omega_.norm();
  if (!(norm > 0.0) || !omega_.allFinite())
    throw std::invalid_argument("normal must be nonzero and finite");
  omega_ /= norm;
}

double psi_cubic(double lambda) {
  return 0.5 * lambda * lambda * lambda + lambda;
}

double cubic_lambda(double b) {
  if (!(b >= 0.0)) throw std::domain_error("cubic_lambda requires b >= 0");
  if (b == 0.0) return 0.0;
  const double c = 8.0 / 27.0;
  const double s = std::sqrt(c + b * b);
  // (s - b)(s + b) = 8/27, so the small branch is computed without
  // subtractive cancellation.
  double lambda = std::cbrt(s + b) - std::cbrt(c / (s + b));
  // Newton polish against Psi(lambda) = b keeps the residual at
  // <= 1e-10 (1 + b) across all magnitudes of b.
  for (int it = 0; it < 2; ++it) {
    const double f = psi_cubic(lambda) - b;
    const double fp = 1.5 * lambda * lambda + 1.0;
    lambda -= f / fp;
  }
  return lambda;
}

MetricFoot vertical_projection(const Point& g, const VerticalHyperplane& P) {
  if (g.z.size() != P.omega().size())
    throw std::invalid_argument("point and hyperplane dimensions differ");
  const double depth = P.offset(g);
  if (!(depth > 0.0))
    throw std::domain_error("point must lie strictly inside the half-space");
  const Eigen::VectorXd& w = P.omega();
  const double twist = perp(g.z).dot(w);
  MetricFoot out;
  out.foot = Point(g.z - depth * w, g.t + 0.5 * depth * twist);
  out.distance = depth;
  out.lambda = -4.0 * depth * depth * depth;
  return out;
}

Point vertical_segment(const Point& g, const VerticalHyperplane& P,
                       double lambda) {
  if (lambda < 0.0) throw std::domain_error("segment parameter must be >= 0");
  const double depth = P.offset(g);
  if (!(depth > 0.0))
    throw std::domain_error("point must lie strictly inside the half-space");
  const Eigen::VectorXd& w = P.omega();
  const double twist = perp(g.z).dot(w);
  return Point(g.z + (lambda - 1.0) * depth * w,
               g.t - 0.5 * (lambda - 1.0) * depth * twist);
}

TangentBall vertical_tangent_center(const Point& gbar,
                                    const VerticalHyperplane& P,
                                    double lambda) {
  if (gbar.z.size() != P.omega().size())
    throw std::invalid_argument("point and hyperplane dimensions differ");
  if (!(lambda > 0.0)) throw std::domain_error("radius parameter must be > 0");
  if (std::abs(P.offset(gbar)) > kOnPlaneTol * (1.0 + gbar.z.norm()))
    throw std::domain_error("touch point does not lie on the hyperplane");
  const Eigen::VectorXd& w = P.omega();
  TangentBall ball;
  ball.center = Point(gbar.z + lambda * w,
                      gbar.t - 0.5 * lambda * perp(gbar.z).dot(w));
  ball.radius = lambda;
  ball.touch = gbar;
  return ball;
}

MetricFoot characteristic_projection(const Point& g) {
  const double zn = g.z.norm();
  if (!(zn > 0.0))
    throw std::domain_error(
        "projection onto {t=0} degenerates on the characteristic axis z = 0");
  if (!(g.t > 0.0))
    throw std::domain_error("point must lie in the open half-space {t > 0}");
  const double b = 2.0 * g.t / (zn * zn);
  const double lambda = cubic_lambda(b);
  MetricFoot out;
  out.foot = Point(g.z + lambda * perp(g.z), 0.0);
  out.distance = zn * lambda * quartic_root(1.0 + lambda * lambda);
  out.lambda = lambda;
  return out;
}

TangentBall characteristic_tangent_ball(const Point& g) {
  const MetricFoot mf = characteristic_projection(g);
  return TangentBall{g, mf.distance, mf.foot};
}

TangentBall characteristic_tangent_center(const Point& gbar, double lambda) {
  const double zn = gbar.z.norm();
  if (!(zn > 0.0))
    throw std::domain_error(
        "no tangent family exists at the characteristic point z = 0");
  if (std::abs(gbar.t) > kOnPlaneTol * (1.0 + zn * zn))
    throw std::domain_error("touch point does not lie on {t = 0}");
  if (!(lambda > 0.0)) throw std::domain_error("parameter must be > 0");
  const double den = 1.0 + lambda * lambda;
  TangentBall ball;
  ball.center = Point((gbar.z - lambda * perp(gbar.z)) / den,
                      psi_cubic(lambda) * zn * zn / (2.0 * den));
  ball.radius = lambda * zn / quartic_root(den);
  ball.touch = Point(gbar.z, 0.0);
  return ball;
}

double characteristic_lambda_for_radius(double zbar_norm, double r) {
  if (!(zbar_norm > 0.0)) throw std::domain_error("|zbar| must be positive");
  if (!(r > 0.0)) throw std::domain_error("radius must be positive");
  // radius(l) = zn * l / (1+l^2)^{1/4} is strictly increasing and unbounded.
  const double target = r / zbar_norm;
  double lo = 0.0, hi = std::max(1.0, 2.0 * target * target);
  while (hi / quartic_root(1.0 + hi * hi) < target) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid / quartic_root(1.0 + mid * mid) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

QuasiSegmentPath quasi_segment_path(const Point& g0) {
  const double zn = g0.z.norm();
  if (!(zn > 0.0))
    throw std::domain_error("quasi-segment requires z0 != 0");
  if (!(g0.t > 0.0))
    throw std::domain_error("quasi-segment requires t0 > 0");
  QuasiSegmentPath path;
  path.lambda0 = cubic_lambda(2.0 * g0.t / (zn * zn));
  path.z0 = g0.z;
  path.zbar = g0.z + path.lambda0 * perp(g0.z);
  path.t0 = g0.t;
  return path;
}

double QuasiSegmentPath::alpha(double lambda) const {
  return (1.0 + lambda0 * lambda) / (1.0 + lambda * lambda);
}

double QuasiSegmentPath::beta(double lambda) const {
  return (lambda0 - lambda) / (1.0 + lambda * lambda);
}

double QuasiSegmentPath::gamma(double lambda) const {
  return 0.5 * (1.0 + lambda0 * lambda0) / (1.0 + lambda * lambda) *
         psi_cubic(lambda);
}

Point QuasiSegmentPath::at(double lambda) const {
  return Point(alpha(lambda) * z0 + beta(lambda) * perp(z0),
               gamma(lambda) * z0.squaredNorm());
}

Point quasi_segment(const Point& g0, double lambda) {
  if (lambda < 0.0) throw std::domain_error("path parameter must be >= 0");
  return quasi_segment_path(g0).at(lambda);
}

double quasi_segment_gap(const Point& g0, double lambda1) {
  const QuasiSegmentPath path = quasi_segment_path(g0);
  if (lambda1 < path.lambda0)
    throw std::domain_error("gap parameter must be >= lambda0");
  const Point g1 = path.at(lambda1);
  return gauge_distance(g1, path.foot()) - gauge_distance(g1, g0);
}

double quasi_gap_largest_lambda1(const Point& g0, double lambda_bar,
                                 int grid) {
  const QuasiSegmentPath path = quasi_segment_path(g0);
  if (!(lambda_bar > path.lambda0)) return 0.0;
  const double rho = gauge_distance(g0, path.foot());
  double best = 0.0;
  // Log grid from just above lambda0 (positive since t0 > 0) to lambda_bar.
  const double lo = std::log(path.lambda0 * (1.0 + 1e-7));
  const double hi = std::log(lambda_bar);
  for (int k = 0; k < grid; ++k) {
    const double l1 =
        std::exp(lo + (hi - lo) * (k + 1) / static_cast<double>(grid));
    const Point g1 = path.at(l1);
    const double gap =
        gauge_distance(g1, path.foot()) - gauge_distance(g1, g0);
    if (gap >= 0.5 * rho) best = std::max(best, l1);
  }
  return best;
}

namespace {

double phi_prime_bracket(double lambda0, double lambda1) {
  const double a = 1.0 + lambda0 * lambda0;
  const double b = 1.0 + lambda1 * lambda1;
  const double mixed = 1.0 + lambda0 * lambda0 * lambda1 * lambda1 +
                       lambda0 * lambda0 + lambda1 * lambda1;
  return mixed * mixed + lambda1 * lambda1 * a * a * b * b;
}

void check_phi_prime_args(double znorm, double lambda0, double lambda1) {
  if (!(znorm > 0.0)) throw std::domain_error("|z0| must be positive");
  if (!(0.0 < lambda0 && lambda0 < lambda1))
    throw std::domain_error("requires 0 < lambda0 < lambda1");
}

}  // namespace

double phi_prime_zero(double znorm, double lambda0, double lambda1) {
  check_phi_prime_args(znorm, lambda0, lambda1);
  const double a = 1.0 + lambda0 * lambda0;
  const double b = 1.0 + lambda1 * lambda1;
  return -4.0 * znorm * a * b * b /
         std::pow(phi_prime_bracket(lambda0, lambda1), 0.75);
}

double phi_prime_zero_exact(double znorm, double lambda0, double lambda1) {
  check_phi_prime_args(znorm, lambda0, lambda1);
  const double a = 1.0 + lambda0 * lambda0;
  const double b = 1.0 + lambda1 * lambda1;
  return -znorm * a * a * b * b /
         std::pow(phi_prime_bracket(lambda0, lambda1), 0.75);
}

}  // namespace heis
