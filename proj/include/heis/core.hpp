#pragma once

// Group algebra, gauge metric and horizontal differential operators for the
// Heisenberg group H^n (coordinates g = (z, t), z = (x, y) in R^{2n}).

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>

namespace heis {

// Group element g = (z, t). z stacks the two horizontal blocks as
// (x_1..x_n, y_1..y_n); t is the vertical coordinate.
struct Point {
  Eigen::VectorXd z;
  double t = 0.0;

  Point() = default;
  Point(Eigen::VectorXd z_in, double t_in);

  static Point identity(int n);
  // Convenience constructor for the 3-dimensional group (n = 1).
  static Point h1(double x, double y, double t);

  int n() const { return static_cast<int>(z.size()) / 2; }
  int horizontal_dim() const { return static_cast<int>(z.size()); }
};

// Coefficients on the horizontal frame X_1,...,X_{2n}.
using HorizontalVector = Eigen::VectorXd;

// Scalar sampling interface; evaluation must be deterministic.
using ScalarField = std::function<double(const Point&)>;

// Orthogonal matrix commuting with the symplectic structure, i.e. an element
// of U(n) acting by (z, t) -> (S z, t). Validated at construction: S^T S = I
// and S J = J S within 1e-12, where J z = z^perp.
class UnitarySymmetry {
 public:
  explicit UnitarySymmetry(Eigen::MatrixXd S);

  static UnitarySymmetry identity(int n);
  static UnitarySymmetry symplectic(int n);  // S = J itself
  // Rotation by angles[i] in each (x_i, y_i) plane.
  static UnitarySymmetry plane_rotation(const Eigen::VectorXd& angles);

  const Eigen::MatrixXd& matrix() const { return S_; }
  int n() const { return static_cast<int>(S_.rows()) / 2; }

 private:
  Eigen::MatrixXd S_;
};

// --- group operations -------------------------------------------------------

Point multiply(const Point& g, const Point& h);
Point inverse(const Point& g);
Point dilate(double lambda, const Point& g);

// z^perp = (y, -x) = J z.
Eigen::VectorXd perp(const Eigen::VectorXd& z);

// Symplectic matrix J on R^{2n}.
Eigen::MatrixXd symplectic_matrix(int n);

// --- gauge metric -----------------------------------------------------------

// N(g) = (|z|^4 + 16 t^2)^{1/4}.
double gauge_norm(const Point& g);

// d(g, h) = N(g^{-1} h); evaluated through the closed form
// d^4 = |z'-z|^4 + 16 (t'-t + <z', z^perp>/2)^2.
double gauge_distance(const Point& g, const Point& h);

Point unitary_apply(const UnitarySymmetry& S, const Point& g);

// --- horizontal calculus ----------------------------------------------------

// Default finite-difference step at g: 1e-4 * (1 + N(g)).
double default_fd_step(const Point& g);

// Central-difference derivative of f along the i-th horizontal field at g,
// i in [0, 2n). The fields are
//   X_i       = d/dx_i - (y_i/2) d/dt,   i < n,
//   X_{n+i}   = d/dy_i + (x_i/2) d/dt,
// and each straight line g + s v_i(g) is the integral curve through g, so a
// straight central difference is second-order exact in direction.
double horizontal_derivative(const ScalarField& f, const Point& g, int i,
                             double step);

// (X_1 f, ..., X_{2n} f)(g) by central differences; O(step^2) for smooth f.
// step <= 0 selects the default rule.
HorizontalVector horizontal_gradient(const ScalarField& f, const Point& g,
                                     double step = -1.0);

// Numeric commutator ([X_i, X_{n+j}] f)(g) by nested central differences.
// With the default f(z,t) = t this is 1 for i == j and 0 otherwise.
double commutator_check(const Point& g, double step, int i = 0, int j = 0,
                        const ScalarField* f = nullptr);

// --- measure ----------------------------------------------------------------

// Monte Carlo estimate of |B(e, R)| for the gauge ball in H^n, sampling the
// bounding box [-R, R]^{2n} x [-R^2/4, R^2/4] (the box is tight: N <= R
// forces |t| <= R^2/4). Seeded and reproducible.
double ball_volume_mc(double R, int n, std::int64_t samples,
                      std::uint64_t seed);

}  // namespace heis
