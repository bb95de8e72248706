#pragma once

// Metric projections onto vertical and characteristic hyperplanes, tangent
// gauge-ball families, and segment / quasi-segment paths.
//
// Conventions: the vertical hyperplane Pi_omega = {<z, omega> = 0} bounds the
// half-space H_omega = {<z, omega> > 0}; the characteristic hyperplane is
// Pi_0 = {t = 0} bounding H_0 = {t > 0}.

#include "heis/core.hpp"

namespace heis {

// Unit normal omega of a vertical hyperplane through the group identity.
// Construction normalizes a nonzero direction.
class VerticalHyperplane {
 public:
  explicit VerticalHyperplane(Eigen::VectorXd omega);
  const Eigen::VectorXd& omega() const { return omega_; }
  int n() const { return static_cast<int>(omega_.size()) / 2; }
  // Signed offset <z, omega>; zero on the hyperplane.
  double offset(const Point& g) const { return omega_.dot(g.z); }

 private:
  Eigen::VectorXd omega_;
};

// Result of a metric projection: the foot point realizing the gauge distance,
// the distance itself, and the associated multiplier (for the characteristic
// projection this is the positive root of the cubic; for the vertical one it
// is the Lagrange multiplier -4 <z0,omega>^3 of the constrained minimization).
struct MetricFoot {
  Point foot;
  double distance = 0.0;
  double lambda = 0.0;
};

struct TangentBall {
  Point center;
  double radius = 0.0;
  Point touch;
};

// Strictly increasing cubic Psi(l) = l^3/2 + l whose inverse parameterizes
// the characteristic projection.
double psi_cubic(double lambda);

// G(b) = Psi^{-1}(b) for b >= 0, evaluated by the Cardano formula in a
// cancellation-free arrangement and polished by Newton steps so that
// |Psi(G(b)) - b| <= 1e-10 (1 + b) across scales.
double cubic_lambda(double b);

// --- vertical hyperplanes ---------------------------------------------------

// Gauge projection of g in H_omega onto Pi_omega. The foot is
//   (z0 - <z0,omega> omega, t0 + <z0,omega><z0^perp,omega>/2)
// and the distance equals <z0,omega> (also the Euclidean distance; the foot
// lies on the horizontal plane through g).
MetricFoot vertical_projection(const Point& g, const VerticalHyperplane& P);

// Point at parameter lambda >= 0 on the straight half-line from the foot
// through g: lambda = 0 is the foot, lambda = 1 is g itself. For lambda >= 1
// the path is a gauge segment: d(g(l), foot) = d(g(l), g) + d(g, foot).
Point vertical_segment(const Point& g, const VerticalHyperplane& P,
                       double lambda);

// Center of the gauge ball of radius lambda tangent to Pi_omega at gbar from
// inside H_omega; the ball is contained in H_omega.
TangentBall vertical_tangent_center(const Point& gbar,
                                    const VerticalHyperplane& P, double lambda);

// --- the characteristic hyperplane {t = 0} ----------------------------------

// Gauge projection of g = (z0, t0), t0 > 0, z0 != 0, onto Pi_0. The foot is
// (z0 + lambda z0^perp, 0) with lambda the root of Psi(lambda) = 2 t0/|z0|^2,
// and the distance is |z0| lambda (1 + lambda^2)^{1/4}.
MetricFoot characteristic_projection(const Point& g);

// Ball centered at g with radius d(g, Pi_0); tangent to Pi_0 at the foot and
// contained in {t > 0}.
TangentBall characteristic_tangent_ball(const Point& g);

// Inverse construction: for gbar = (zbar, 0) with zbar != 0 and lambda > 0,
// the center
//   ( (zbar - lambda zbar^perp)/(1+lambda^2),
//     Psi(lambda) |zbar|^2 / (2 (1+lambda^2)) )
// projects back onto gbar with radius lambda |zbar| / (1+lambda^2)^{1/4}.
TangentBall characteristic_tangent_center(const Point& gbar, double lambda);

// Solves radius(lambda) = lambda |zbar| / (1+lambda^2)^{1/4} = r for the
// unique lambda > 0 (the map is strictly increasing).
double characteristic_lambda_for_radius(double zbar_norm, double r);

// Path of tangent-ball centers through g0 = (z0, t0) in H_0, all projecting
// onto the common foot (z0 + lambda0 z0^perp, 0):
//   z(l) = alpha(l) z0 + beta(l) z0^perp,  t(l) = gamma(l) |z0|^2,
// with alpha(l) = (1 + lambda0 l)/(1+l^2), beta(l) = (lambda0 - l)/(1+l^2),
// gamma(l) = (1+lambda0^2) Psi(l) / (2 (1+l^2)). At l = lambda0 the path
// passes through g0; at l = 0 it reaches the foot.
struct QuasiSegmentPath {
  double lambda0 = 0.0;
  Eigen::VectorXd z0;
  Eigen::VectorXd zbar;  // z0 + lambda0 z0^perp
  double t0 = 0.0;

  double alpha(double lambda) const;
  double beta(double lambda) const;
  double gamma(double lambda) const;
  Point at(double lambda) const;
  Point foot() const { return Point(zbar, 0.0); }
};

QuasiSegmentPath quasi_segment_path(const Point& g0);

// Point on the quasi-segment path through g0 at parameter lambda >= 0.
Point quasi_segment(const Point& g0, double lambda);

// d(g(lambda1), foot) - d(g(lambda1), g0) for lambda1 >= lambda0. Positive
// and at least d(g0, foot)/2 for lambda1 below a small threshold.
double quasi_segment_gap(const Point& g0, double lambda1);

// Largest lambda1 on a log grid in (lambda0, lambda_bar] at which the gap is
// still >= d(g0, foot)/2; returns 0 if the inequality fails everywhere.
double quasi_gap_largest_lambda1(const Point& g0, double lambda_bar = 0.25,
                                 int grid = 64);

// Reference closed form for the derivative at lambda = 0 of
// l -> d(g(lambda1), g(l)) along the quasi-segment path with parameters
// 0 < lambda0 < lambda1 and |z0| = znorm:
//   -4 znorm (1+l0^2)(1+l1^2)^2 /
//      [ (1 + l0^2 l1^2 + l0^2 + l1^2)^2 + l1^2 (1+l0^2)^2 (1+l1^2)^2 ]^{3/4}.
// Strictly negative; tends to -4 znorm as l0, l1 -> 0. NOTE: this is the
// published normalization; the actual derivative of the path distance is
// phi_prime_zero_exact below, which differs by the factor (1+l0^2)/4 (see
// the derivative tests for the numeric cross-check).
double phi_prime_zero(double znorm, double lambda0, double lambda1);

// Exact derivative at lambda = 0 of l -> d(g(lambda1), g(l)): carrying out
// the chain rule on d^4 = |z0|^4 (U^2 + 16 V^2) with
//   U(l) = (alpha(l)-alpha(l1))^2 + (beta(l)-beta(l1))^2,
//   V(l) = gamma(l)-gamma(l1) + (beta(l)alpha(l1) - alpha(l)beta(l1))/2
// gives
//   -znorm (1+l0^2)^2 (1+l1^2)^2 /
//      [ (1 + l0^2 l1^2 + l0^2 + l1^2)^2 + l1^2 (1+l0^2)^2 (1+l1^2)^2 ]^{3/4},
// verified against a one-sided difference quotient of the path distance.
double phi_prime_zero_exact(double znorm, double lambda0, double lambda1);

}  // namespace heis
