#include "heis/core.hpp"

#include <cmath>
#include <random>

namespace heis {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void require_same_group(const Point& g, const Point& h) {
  require(g.z.size() == h.z.size(), "points live in different groups");
}

}  // namespace

Point::Point(Eigen::VectorXd z_in, double t_in) : z(std::move(z_in)), t(t_in) {
  require(z.size() >= 2 && z.size() % 2 == 0,
          "horizontal part must have even length 2n, n >= 1");
  require(z.allFinite() && std::isfinite(t), "point has non-finite entries");
}

Point Point::identity(int n) {
  require(n >= 1, "n must be >= 1");
  return Point(Eigen::VectorXd::Zero(2 * n), 0.0);
}

Point Point::h1(double x, double y, double t) {
  Eigen::VectorXd z(2);
  z << x, y;
  return Point(std::move(z), t);
}

UnitarySymmetry::UnitarySymmetry(Eigen::MatrixXd S) : S_(std::move(S)) {
  require(S_.rows() == S_.cols() && S_.rows() >= 2 && S_.rows() % 2 == 0,
          "symmetry matrix must be square of even size 2n");
  const int m = static_cast<int>(S_.rows());
  const Eigen::MatrixXd J = symplectic_matrix(m / 2);
  const double orth = (S_.transpose() * S_ - Eigen::MatrixXd::Identity(m, m))
                          .cwiseAbs()
                          .maxCoeff();
  const double comm = (S_ * J - J * S_).cwiseAbs().maxCoeff();
  if (orth > 1e-12 || comm > 1e-12)
    throw std::invalid_argument(
        "matrix is not a gauge isometry: requires S^T S = I and S J = J S");
}

UnitarySymmetry UnitarySymmetry::identity(int n) {
  return UnitarySymmetry(Eigen::MatrixXd::Identity(2 * n, 2 * n));
}

UnitarySymmetry UnitarySymmetry::symplectic(int n) {
  return UnitarySymmetry(symplectic_matrix(n));
}

UnitarySymmetry UnitarySymmetry::plane_rotation(const Eigen::VectorXd& angles) {
  const int n = static_cast<int>(angles.size());
  require(n >= 1, "need at least one rotation angle");
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    const double c = std::cos(angles[i]);
    const double s = std::sin(angles[i]);
    S(i, i) = c;
    S(i, n + i) = -s;
    S(n + i, i) = s;
    S(n + i, n + i) = c;
  }
  return UnitarySymmetry(std::move(S));
}

Eigen::MatrixXd symplectic_matrix(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  J.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  return J;
}

Eigen::VectorXd perp(const Eigen::VectorXd& z) {
  require(z.size() >= 2 && z.size() % 2 == 0, "perp needs even length");
  const int n = static_cast<int>(z.size()) / 2;
  Eigen::VectorXd out(2 * n);
  out.head(n) = z.tail(n);
  out.tail(n) = -z.head(n);
  return out;
}

Point multiply(const Point& g, const Point& h) {
  require_same_group(g, h);
  // t-component picks up the symplectic area term <z, (z')^perp>/2.
  const double tw = 0.5 * g.z.dot(perp(h.z));
  return Point(g.z + h.z, g.t + h.t + tw);
}

Point inverse(const Point& g) { return Point(-g.z, -g.t); }

Point dilate(double lambda, const Point& g) {
  require(lambda > 0.0, "dilation factor must be positive");
  return Point(lambda * g.z, lambda * lambda * g.t);
}

double gauge_norm(const Point& g) {
  const double zn2 = g.z.squaredNorm();
  return std::sqrt(std::sqrt(zn2 * zn2 + 16.0 * g.t * g.t));
}

double gauge_distance(const Point& g, const Point& h) {
  require_same_group(g, h);
  const Eigen::VectorXd dz = h.z - g.z;
  const double tw = h.t - g.t + 0.5 * h.z.dot(perp(g.z));
  const double dz2 = dz.squaredNorm();
  return std::sqrt(std::sqrt(dz2 * dz2 + 16.0 * tw * tw));
}

Point unitary_apply(const UnitarySymmetry& S, const Point& g) {
  require(S.matrix().rows() == g.z.size(), "symmetry size does not match point");
  return Point(S.matrix() * g.z, g.t);
}

double default_fd_step(const Point& g) { return 1e-4 * (1.0 + gauge_norm(g)); }

namespace {

// Straight-line direction of the i-th horizontal field at q; the coefficient
// (-y_i/2 or x_i/2) is constant along the line, which makes the line the
// exact integral curve.
void field_direction(const Point& q, int i, Eigen::VectorXd* dz, double* dt) {
  const int n = q.n();
  dz->setZero(2 * n);
  if (i < n) {
    (*dz)[i] = 1.0;
    *dt = -0.5 * q.z[n + i];
  } else {
    (*dz)[i] = 1.0;
    *dt = 0.5 * q.z[i - n];
  }
}

double eval_checked(const ScalarField& f, const Point& q) {
  const double v = f(q);
  if (!std::isfinite(v))
    throw std::runtime_error("scalar field evaluation returned non-finite value");
  return v;
}

}  // namespace

double horizontal_derivative(const ScalarField& f, const Point& g, int i,
                             double step) {
  require(i >= 0 && i < g.horizontal_dim(), "field index out of range");
  require(step > 0.0, "step must be positive");
  Eigen::VectorXd dz;
  double dt = 0.0;
  field_direction(g, i, &dz, &dt);
  const Point fwd(g.z + step * dz, g.t + step * dt);
  const Point bwd(g.z - step * dz, g.t - step * dt);
  return (eval_checked(f, fwd) - eval_checked(f, bwd)) / (2.0 * step);
}

HorizontalVector horizontal_gradient(const ScalarField& f, const Point& g,
                                     double step) {
  const double h = step > 0.0 ? step : default_fd_step(g);
  HorizontalVector grad(g.horizontal_dim());
  for (int i = 0; i < g.horizontal_dim(); ++i)
    grad[i] = horizontal_derivative(f, g, i, h);
  return grad;
}

double commutator_check(const Point& g, double step, int i, int j,
                        const ScalarField* f) {
  require(step > 0.0, "step must be positive");
  const int n = g.n();
  require(i >= 0 && i < n && j >= 0 && j < n, "commutator indices out of range");
  const ScalarField vertical = [](const Point& q) { return q.t; };
  const ScalarField& field = f ? *f : vertical;
  const int a = i;      // X_i
  const int b = n + j;  // X_{n+j}
  const auto first = [&](const Point& q) {
    return horizontal_derivative(field, q, b, step);
  };
  const auto second = [&](const Point& q) {
    return horizontal_derivative(field, q, a, step);
  };
  return horizontal_derivative(first, g, a, step) -
         horizontal_derivative(second, g, b, step);
}

double ball_volume_mc(double R, int n, std::int64_t samples,
                      std::uint64_t seed) {
  require(R > 0.0, "radius must be positive");
  require(n >= 1, "n must be >= 1");
  require(samples >= 10000, "need at least 1e4 samples");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> uz(-R, R);
  std::uniform_real_distribution<double> ut(-R * R / 4.0, R * R / 4.0);
  const double R4 = R * R * R * R;
  std::int64_t hits = 0;
  Eigen::VectorXd z(2 * n);
  for (std::int64_t s = 0; s < samples; ++s) {
    for (int k = 0; k < 2 * n; ++k) z[k] = uz(gen);
    const double t = ut(gen);
    const double zn2 = z.squaredNorm();
    if (zn2 * zn2 + 16.0 * t * t < R4) ++hits;
  }
  const double box = std::pow(2.0 * R, 2 * n) * (R * R / 2.0);
  return box * static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace heis
